// Gate-level netlists in the ISCAS-89 .bench dialect.
//
// Grammar (line oriented, whitespace insignificant):
//   # comment
//   INPUT(<wire>)
//   OUTPUT(<wire>)
//   <wire> = <KIND>(<wire>{, <wire>})
// KIND is one of AND NAND OR NOR XOR XNOR NOT BUFF DFF, case-insensitive.
// Wire names match [A-Za-z0-9_.\[\]]+ and are case-sensitive.

#ifndef HTDET_NETLIST_HPP
#define HTDET_NETLIST_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "htdet/error.hpp"

namespace htdet {

enum class GateKind : std::uint8_t { And, Nand, Or, Nor, Xor, Xnor, Not, Buff, Dff };

std::string_view to_string(GateKind kind) noexcept;
std::optional<GateKind> gate_kind_from_string(std::string_view keyword) noexcept;

struct Gate {
  GateKind kind;
  std::string output;
  std::vector<std::string> fanins;

  friend bool operator==(const Gate&, const Gate&) = default;
};

enum class WireRole : std::uint8_t { PrimaryInput = 0, Internal = 1, PrimaryOutput = 2 };

std::string_view to_string(WireRole role) noexcept;

struct Violation {
  ErrorCode code;
  std::string subject;  // offending wire or gate output
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Immutable circuit <PI, W, POUT>. Construction never throws on structural
/// problems; use validate() or parse_bench() to enforce the invariants.
class Netlist {
 public:
  Netlist() = default;
  Netlist(std::string name, std::vector<std::string> inputs,
          std::vector<std::string> outputs, std::vector<Gate> gates);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  [[nodiscard]] const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  [[nodiscard]] const std::vector<Gate>& gates() const noexcept { return gates_; }

  /// Every wire: primary inputs in declaration order, then gate outputs in
  /// gate order. Undriven names referenced only as fanins are not included.
  [[nodiscard]] const std::vector<std::string>& wires() const noexcept { return wires_; }
  [[nodiscard]] std::optional<std::size_t> wire_index(std::string_view wire) const;
  [[nodiscard]] WireRole role(std::size_t wire) const noexcept { return roles_[wire]; }
  [[nodiscard]] const std::vector<WireRole>& roles() const noexcept { return roles_; }

  /// Indices into gates() of the combinational gates in evaluation order.
  /// Empty when the combinational subgraph has a cycle.
  [[nodiscard]] const std::vector<std::size_t>& topo_order() const noexcept { return topo_order_; }
  [[nodiscard]] bool has_dff() const noexcept;

  /// Gate index driving a wire, or nullopt for primary inputs.
  [[nodiscard]] std::optional<std::size_t> driver(std::size_t wire) const noexcept;

  /// A combinational cycle as a closed wire path (first name repeated at the
  /// end), empty when acyclic.
  [[nodiscard]] const std::vector<std::string>& combinational_cycle() const noexcept {
    return cycle_;
  }

 private:
  std::string name_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<Gate> gates_;
  std::vector<std::string> wires_;
  std::vector<WireRole> roles_;
  std::vector<std::optional<std::size_t>> drivers_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> topo_order_;
  std::vector<std::string> cycle_;
};

ValidationReport validate(const Netlist& netlist);

/// Parses .bench text; throws ParseError/Error on the first problem found.
Netlist parse_bench(std::string_view text, std::string name = "netlist");
Netlist read_bench_file(const std::string& path);

/// Serializes back to .bench (inputs, outputs, then gates in order).
std::string to_bench(const Netlist& netlist);

/// Boolean function of a combinational gate kind over its fanin values.
bool eval_gate(GateKind kind, const std::vector<bool>& fanins);

}  // namespace htdet

#endif  // HTDET_NETLIST_HPP
