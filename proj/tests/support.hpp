// Shared fixtures for the unit and acceptance tests.

#ifndef HTDET_TESTS_SUPPORT_HPP
#define HTDET_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "htdet/bitvector.hpp"
#include "htdet/infotheory.hpp"
#include "htdet/netlist.hpp"
#include "htdet/simulator.hpp"

namespace htdet::fixture {

inline constexpr const char* kToyBench =
    "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(f)\n"
    "d = AND(a, b)\ne = NOT(c)\nf = OR(d, e)\n";

inline Netlist toy_circuit() { return parse_bench(kToyBench, "toy"); }

// Transition probabilities of the fourteen example wires W1..W14.
inline const std::vector<double> kExampleProbabilities = {1.0 / 1000, 1.0 / 800, 1.0 / 500, 1.0 / 200, 1.0 / 100,
                                            1.0 / 80,   1.0 / 50,  1.0 / 20,  1.0 / 10,  1.0 / 8,
                                            1.0 / 5,    3.0 / 10,  1.0 / 2,   6.0 / 10};

inline std::vector<EntropyRecord> example_records() {
  std::vector<EntropyRecord> out;
  for (std::size_t i = 0; i < kExampleProbabilities.size(); ++i) {
    out.push_back(EntropyRecord{"W" + std::to_string(i + 1), binary_entropy(kExampleProbabilities[i]), kExampleProbabilities[i]});
  }
  return out;
}

// Random well-formed netlist: gates only read earlier wires, so the
// combinational part is acyclic. With dff_fraction > 0 some gates are DFFs
// whose fanin may be any later wire too, which creates sequential loops.
inline Netlist random_netlist(std::mt19937_64& rng, std::size_t inputs, std::size_t gates,
                              double dff_fraction = 0.0, const std::string& name = "rand") {
  static constexpr GateKind kComb[] = {GateKind::And, GateKind::Nand, GateKind::Or, GateKind::Nor,
                                       GateKind::Xor, GateKind::Xnor, GateKind::Not, GateKind::Buff};
  std::vector<std::string> in;
  for (std::size_t i = 0; i < inputs; ++i) in.push_back("i" + std::to_string(i));
  std::vector<std::string> names = in;
  for (std::size_t g = 0; g < gates; ++g) names.push_back("g" + std::to_string(g));

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Gate> gs;
  for (std::size_t g = 0; g < gates; ++g) {
    const std::size_t visible = inputs + g;  // wires defined before this gate
    auto pick = [&](std::size_t limit) { return names[std::uniform_int_distribution<std::size_t>(0, limit - 1)(rng)]; };
    Gate gate;
    gate.output = names[inputs + g];
    if (u01(rng) < dff_fraction) {
      gate.kind = GateKind::Dff;
      gate.fanins = {pick(inputs + gates)};
      if (gate.fanins[0] == gate.output) gate.fanins[0] = names[0];
    } else {
      gate.kind = kComb[std::uniform_int_distribution<int>(0, 7)(rng)];
      const std::size_t arity = (gate.kind == GateKind::Not || gate.kind == GateKind::Buff)
                                    ? 1
                                    : std::uniform_int_distribution<std::size_t>(2, 4)(rng);
      for (std::size_t k = 0; k < arity; ++k) gate.fanins.push_back(pick(visible));
    }
    gs.push_back(std::move(gate));
  }
  std::vector<std::string> out;
  for (std::size_t g = gates >= 3 ? gates - 3 : 0; g < gates; ++g) out.push_back(names[inputs + g]);
  return Netlist(name, std::move(in), std::move(out), std::move(gs));
}

// Gate-by-gate scalar simulation driven by the PI rows of `store`. DFFs
// start at 0 and take their D value at the end of each cycle.
inline WaveformStore scalar_reference(const Netlist& netlist, const WaveformStore& store) {
  const std::uint64_t n = store.cycles();
  WaveformStore ref(netlist.wires(), netlist.roles(), n);
  std::vector<bool> value(netlist.wires().size(), false);
  std::vector<bool> dff_state(netlist.gates().size(), false);
  for (std::uint64_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < netlist.inputs().size(); ++i) {
      value[*netlist.wire_index(netlist.inputs()[i])] = store.row(netlist.inputs()[i])[t];
    }
    for (std::size_t g = 0; g < netlist.gates().size(); ++g) {
      if (netlist.gates()[g].kind == GateKind::Dff) value[*netlist.wire_index(netlist.gates()[g].output)] = dff_state[g];
    }
    for (std::size_t g : netlist.topo_order()) {
      const Gate& gate = netlist.gates()[g];
      std::vector<bool> fanins;
      for (const auto& f : gate.fanins) fanins.push_back(value[*netlist.wire_index(f)]);
      value[*netlist.wire_index(gate.output)] = eval_gate(gate.kind, fanins);
    }
    for (std::size_t g = 0; g < netlist.gates().size(); ++g) {
      const Gate& gate = netlist.gates()[g];
      if (gate.kind == GateKind::Dff) dff_state[g] = value[*netlist.wire_index(gate.fanins[0])];
    }
    for (std::size_t w = 0; w < value.size(); ++w) ref.row(w).set(t, value[w]);
  }
  return ref;
}

inline BitVector random_bits(std::mt19937_64& rng, std::size_t n, double p_one = 0.5) {
  std::bernoulli_distribution bit(p_one);
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, bit(rng));
  return v;
}

inline EntropyRecord record(std::string wire, double entropy, double p = 0.1) {
  return EntropyRecord{std::move(wire), entropy, p};
}

}  // namespace htdet::fixture

#endif  // HTDET_TESTS_SUPPORT_HPP
