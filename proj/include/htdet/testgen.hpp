// Mutual-information driven test generation: strong-correlation list,
// minimum SCPI cover and constrained-random stimulus.

#ifndef HTDET_TESTGEN_HPP
#define HTDET_TESTGEN_HPP

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "htdet/cluster.hpp"
#include "htdet/netlist.hpp"
#include "htdet/simulator.hpp"

namespace htdet {

using WireSet = std::set<std::string>;

/// Set sum and difference as used when combining covered-suspect sets.
WireSet operator+(const WireSet& a, const WireSet& b);
WireSet operator-(const WireSet& a, const WireSet& b);

/// Rows are suspects, columns primary inputs; entries are I(sw_i; pi_j) in
/// nats over the transition encodings.
struct StrongCorrelationList {
  std::vector<std::string> suspects;
  std::vector<std::string> inputs;
  Eigen::MatrixXd mi;
  Eigen::VectorXd thresholds;  // row means
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> bits;  // mi > threshold
  std::vector<std::vector<std::size_t>> sscpi;  // per suspect, input columns
  std::vector<std::size_t> uncoverable;         // suspects with empty SSCPI

  /// Suspects whose SSCPI contains input column j.
  [[nodiscard]] WireSet covered_by(std::size_t input) const;
};

/// Derives thresholds, bits and SSCPIs from a given MI matrix.
StrongCorrelationList make_correlation_list(std::vector<std::string> suspects,
                                            std::vector<std::string> inputs, Eigen::MatrixXd mi);

/// Sequences MI is measured on. Transition is the detection domain; Raw
/// measures the sampled values themselves (truth-table style analysis).
enum class MiDomain { Transition, Raw };

/// Encodes every suspect and primary input of the store and fills the MI
/// matrix. Throws Error(MissingWire) when a suspect is not in the store.
StrongCorrelationList build_correlation_list(const WaveformStore& store, const SuspectSet& suspects,
                                             MiDomain domain = MiDomain::Transition);

enum class CoverStrategy { Auto, Exact, Greedy };

struct ScpiSelection {
  std::vector<std::size_t> chosen;       // input columns, ascending
  std::vector<std::string> chosen_names;
  WireSet covered;
  std::vector<std::string> uncoverable;
  bool optimal = false;  // true when produced by the exact recurrence
};

inline constexpr std::size_t kExactMaxSuspects = 20;
inline constexpr std::size_t kExactMaxInputs = 24;

/// Minimum set of inputs whose covered-suspect sets union to every coverable
/// suspect. Auto uses the exact recurrence when t <= 20 and l <= 24 and the
/// greedy cover otherwise. Throws Error(NothingToCover) when the list has
/// no suspects at all.
ScpiSelection select_scpi(const StrongCorrelationList& list, CoverStrategy strategy = CoverStrategy::Auto);

enum class HoldValue { Zero, One, Majority };

struct ConstrainedSpec {
  StimulusSpec spec;
  std::vector<std::string> warnings;
};

/// Chosen inputs stay FullRandom; every other input is held constant
/// (majority of its baseline samples, ties to 0, unless overridden).
ConstrainedSpec make_constrained_spec(const ScpiSelection& selection, std::span<const std::string> inputs,
                                      const WaveformStore& baseline, std::uint64_t seed,
                                      std::uint64_t cycles, HoldValue hold = HoldValue::Majority);
ConstrainedSpec make_constrained_spec(const ScpiSelection& selection, const Netlist& netlist,
                                      const WaveformStore& baseline, std::uint64_t seed,
                                      std::uint64_t cycles, HoldValue hold = HoldValue::Majority);

struct TransitionStats {
  std::size_t tr_max = 0;
  double tr_ave = 0.0;
};

struct TransitionComparison {
  TransitionStats before;
  TransitionStats after;
  std::vector<std::string> wires;
  std::vector<std::size_t> before_counts;
  std::vector<std::size_t> after_counts;
};

TransitionStats transition_stats(const WaveformStore& store, std::span<const std::string> wires);

/// Throws Error(CycleMismatch) or Error(MissingWire).
TransitionComparison transition_gain(const WaveformStore& before, const WaveformStore& after,
                                     std::span<const std::string> suspects);
TransitionComparison transition_gain(const WaveformStore& before, const WaveformStore& after,
                                     const SuspectSet& suspects);

}  // namespace htdet

#endif  // HTDET_TESTGEN_HPP
