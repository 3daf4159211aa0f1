// Deterministic two-valued cycle simulation and the waveform store.

#ifndef HTDET_SIMULATOR_HPP
#define HTDET_SIMULATOR_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "htdet/bitvector.hpp"
#include "htdet/netlist.hpp"

namespace htdet {

enum class InputPolicy : std::uint8_t { FullRandom, Const0, Const1 };

std::string_view to_string(InputPolicy policy) noexcept;  // "random" | "const0" | "const1"

struct StimulusSpec {
  std::uint64_t seed = 0;
  std::uint64_t cycles = 0;
  std::map<std::string, InputPolicy> inputs;

  /// Every primary input FullRandom.
  static StimulusSpec full_random(const Netlist& netlist, std::uint64_t seed, std::uint64_t cycles);

  friend bool operator==(const StimulusSpec&, const StimulusSpec&) = default;
};

/// JSON form: {"seed":u64,"cycles":u64,"inputs":{"<name>":"random"|"const0"|"const1"}}
std::string to_json(const StimulusSpec& spec);
StimulusSpec stimulus_spec_from_json(std::string_view json);

/// 64-bit FNV-1a, used for provenance digests.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;
std::uint64_t digest(const StimulusSpec& spec);

/// Per-wire sample sequences (the original waveforms), one bit per cycle.
class WaveformStore {
 public:
  WaveformStore() = default;
  WaveformStore(std::vector<std::string> names, std::vector<WireRole> roles, std::uint64_t cycles);

  [[nodiscard]] std::uint64_t cycles() const noexcept { return cycles_; }
  [[nodiscard]] std::size_t wire_count() const noexcept { return names_.size(); }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] const std::vector<WireRole>& roles() const noexcept { return roles_; }
  [[nodiscard]] std::optional<std::size_t> index(std::string_view wire) const;

  [[nodiscard]] const BitVector& row(std::size_t wire) const noexcept { return rows_[wire]; }
  [[nodiscard]] BitVector& row(std::size_t wire) noexcept { return rows_[wire]; }
  /// Throws Error(MissingWire) for unknown names.
  [[nodiscard]] const BitVector& row(std::string_view wire) const;

  std::string netlist_name;
  std::uint64_t seed = 0;
  std::uint64_t stimulus_digest = 0;

  friend bool operator==(const WaveformStore&, const WaveformStore&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<WireRole> roles_;
  std::vector<BitVector> rows_;
  std::uint64_t cycles_ = 0;
  std::unordered_map<std::string, std::size_t> by_name_;
};

/// Simulates `spec.cycles` clock cycles. PI values come from independent
/// per-input streams, DFFs start at 0 and update after combinational
/// evaluation. Output is bit-identical for identical (netlist, spec).
WaveformStore simulate(const Netlist& netlist, const StimulusSpec& spec);

/// One cycle per input assignment in ascending binary order; the first
/// declared input is the most significant bit.
WaveformStore exhaustive_simulate(const Netlist& netlist);

/// Replays sampled cycles gate by gate against the recorded values.
struct AuditReport {
  std::size_t cycles_checked = 0;
  std::size_t gate_checks = 0;
  std::vector<std::string> mismatches;  // "<wire>@<cycle>"
  [[nodiscard]] bool ok() const noexcept { return mismatches.empty(); }
};
AuditReport audit_replay(const Netlist& netlist, const WaveformStore& store,
                         std::size_t sample_cycles, std::uint64_t seed);

/// Fraction of non-PI wires that toggled at least once.
double transition_coverage(const WaveformStore& store);

// Binary store layout (little endian):
//   "HTDW" | u32 version | u32 wire count | u64 cycles | u64 seed
//   name table: per wire u32 byte length + UTF-8 name
//   metadata: u32 length + netlist name, u64 stimulus digest, u8 role per wire
//   rows: per wire ceil(cycles/8) bytes, LSB-first within each byte
inline constexpr std::uint32_t kStoreFormatVersion = 1;

void write_store(std::ostream& out, const WaveformStore& store);
void write_store_file(const std::string& path, const WaveformStore& store);
WaveformStore read_store(std::istream& in);
WaveformStore read_store_file(const std::string& path);
std::uint64_t serialized_size(const WaveformStore& store);

/// Debug export: {"<wire>": "0101...", ...}. Intended for small stores.
std::string store_to_debug_json(const WaveformStore& store);

}  // namespace htdet

#endif  // HTDET_SIMULATOR_HPP
