// Transition encoding of original waveforms and VCD import.

#ifndef HTDET_WAVEFORM_HPP
#define HTDET_WAVEFORM_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "htdet/bitvector.hpp"
#include "htdet/infotheory.hpp"
#include "htdet/netlist.hpp"
#include "htdet/simulator.hpp"

namespace htdet {

/// symbols[i] = 1 iff s_i != s_{i+1}; one symbol per adjacent sample pair.
struct EncodedWaveform {
  std::string wire;
  BitVector symbols;
  std::size_t transition_count = 0;
};

/// Throws Error(SequenceTooShort) for fewer than two samples.
EncodedWaveform encode_transitions(const BitVector& waveform, std::string wire = {});

/// transition_count / symbol count. Throws Error(EmptySequence) when empty.
double transition_probability(const EncodedWaveform& encoded);

/// Number of i with s_i != s_{i+1}, without materializing the encoding.
std::size_t count_transitions(const BitVector& waveform) noexcept;

/// Encoded-waveform entropy and transition probability of every wire in
/// W and POUT (primary inputs skipped), in store order.
std::vector<EntropyRecord> entropy_records(const WaveformStore& store);

struct VcdImportOptions {
  std::string scope;            // hierarchical prefix, e.g. "tb.dut"; empty matches all
  std::uint64_t sample_period = 1;
  const Netlist* netlist = nullptr;  // when set, wire roles come from it
};

struct VcdImportResult {
  WaveformStore store;
  std::map<std::string, std::size_t> unknown_value_counts;  // x/z samples mapped to 0
  [[nodiscard]] std::size_t total_warnings() const noexcept;
};

/// Resamples scalar VCD variables at t = k * sample_period for
/// k = 0..floor(last_time / sample_period). Store names are the variable
/// names relative to the scope prefix.
VcdImportResult import_vcd(std::string_view text, const VcdImportOptions& options);

}  // namespace htdet

#endif  // HTDET_WAVEFORM_HPP
