#include "htdet/testgen.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "htdet/infotheory.hpp"
#include "htdet/parallel.hpp"
#include "htdet/waveform.hpp"

namespace htdet {

WireSet operator+(const WireSet& a, const WireSet& b) {
  WireSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

WireSet operator-(const WireSet& a, const WireSet& b) {
  WireSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

WireSet StrongCorrelationList::covered_by(std::size_t input) const {
  WireSet out;
  for (std::size_t i = 0; i < suspects.size(); ++i) {
    if (bits(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(input))) out.insert(suspects[i]);
  }
  return out;
}

StrongCorrelationList make_correlation_list(std::vector<std::string> suspects,
                                            std::vector<std::string> inputs, Eigen::MatrixXd mi) {
  if (mi.rows() != static_cast<Eigen::Index>(suspects.size()) ||
      mi.cols() != static_cast<Eigen::Index>(inputs.size())) {
    throw std::invalid_argument("MI matrix shape does not match suspects x inputs");
  }
  StrongCorrelationList list;
  list.suspects = std::move(suspects);
  list.inputs = std::move(inputs);
  list.mi = std::move(mi);
  const Eigen::Index t = list.mi.rows();
  const Eigen::Index l = list.mi.cols();
  list.thresholds = l > 0 ? Eigen::VectorXd(list.mi.rowwise().sum() / static_cast<double>(l))
                          : Eigen::VectorXd::Zero(t);
  list.bits = (list.mi.array() > list.thresholds.replicate(1, l).array());
  list.sscpi.resize(static_cast<std::size_t>(t));
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < l; ++j) {
      if (list.bits(i, j)) list.sscpi[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
    }
    if (list.sscpi[static_cast<std::size_t>(i)].empty()) list.uncoverable.push_back(static_cast<std::size_t>(i));
  }
  return list;
}

StrongCorrelationList build_correlation_list(const WaveformStore& store, const SuspectSet& suspects,
                                             MiDomain domain) {
  std::vector<std::string> suspect_names;
  std::vector<const BitVector*> suspect_rows;
  for (const auto& rec : suspects.wires) {
    suspect_names.push_back(rec.wire);
    suspect_rows.push_back(&store.row(rec.wire));  // throws MissingWire
  }
  std::vector<std::string> input_names;
  std::vector<const BitVector*> input_rows;
  for (std::size_t w = 0; w < store.wire_count(); ++w) {
    if (store.roles()[w] == WireRole::PrimaryInput) {
      input_names.push_back(store.names()[w]);
      input_rows.push_back(&store.row(w));
    }
  }

  std::vector<BitVector> enc_suspects(suspect_rows.size());
  std::vector<BitVector> enc_inputs(input_rows.size());
  auto prepare = [domain](const BitVector& row) {
    return domain == MiDomain::Raw ? row : encode_transitions(row).symbols;
  };
  parallel_for(enc_suspects.size(), [&](std::size_t i) { enc_suspects[i] = prepare(*suspect_rows[i]); });
  parallel_for(enc_inputs.size(), [&](std::size_t j) { enc_inputs[j] = prepare(*input_rows[j]); });

  const auto t = static_cast<Eigen::Index>(enc_suspects.size());
  const auto l = static_cast<Eigen::Index>(enc_inputs.size());
  Eigen::MatrixXd mi(t, l);
  parallel_for(static_cast<std::size_t>(t * l), [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k) / std::max<Eigen::Index>(l, 1);
    const auto j = static_cast<Eigen::Index>(k) % std::max<Eigen::Index>(l, 1);
    mi(i, j) = mutual_information(enc_suspects[static_cast<std::size_t>(i)], enc_inputs[static_cast<std::size_t>(j)]);
  });
  return make_correlation_list(std::move(suspect_names), std::move(input_names), std::move(mi));
}

namespace {

struct CoverInstance {
  std::vector<std::size_t> suspects;           // coverable suspect rows
  std::vector<std::vector<std::size_t>> sets;  // per input: positions into `suspects`
};

CoverInstance cover_instance(const StrongCorrelationList& list) {
  CoverInstance inst;
  std::vector<std::size_t> position(list.suspects.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < list.suspects.size(); ++i) {
    if (!list.sscpi[i].empty()) {
      position[i] = inst.suspects.size();
      inst.suspects.push_back(i);
    }
  }
  inst.sets.resize(list.inputs.size());
  for (std::size_t i = 0; i < list.suspects.size(); ++i) {
    for (std::size_t j : list.sscpi[i]) inst.sets[j].push_back(position[i]);
  }
  return inst;
}

// f(k, y): fewest of the first k inputs covering suspect subset y.
// f(0, 0) = 0, f(0, y != 0) = inf,
// f(k, y) = min(f(k-1, y), f(k-1, y - S_k) + 1) when S_k meets y, else f(k-1, y).
std::vector<std::size_t> exact_cover(const CoverInstance& inst) {
  const std::size_t t = inst.suspects.size();
  const std::size_t l = inst.sets.size();
  if (t > kExactMaxSuspects) throw std::invalid_argument("exact cover supports at most 20 suspects");
  constexpr std::uint8_t kInf = std::numeric_limits<std::uint8_t>::max();
  const std::size_t states = std::size_t{1} << t;
  std::vector<std::uint32_t> mask(l, 0);
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t s : inst.sets[j]) mask[j] |= std::uint32_t{1} << s;
  }
  std::vector<std::vector<std::uint8_t>> f(l + 1, std::vector<std::uint8_t>(states, kInf));
  f[0][0] = 0;
  for (std::size_t k = 1; k <= l; ++k) {
    const std::uint32_t m = mask[k - 1];
    for (std::size_t y = 0; y < states; ++y) {
      std::uint8_t best = f[k - 1][y];
      if (m & y) {
        const std::uint8_t rest = f[k - 1][y & ~m];
        if (rest != kInf && rest + 1 < best) best = static_cast<std::uint8_t>(rest + 1);
      }
      f[k][y] = best;
    }
  }
  std::vector<std::size_t> chosen;
  std::size_t y = states - 1;
  if (f[l][y] == kInf) throw std::logic_error("coverable suspects cannot be covered");
  for (std::size_t k = l; k > 0 && y != 0; --k) {
    if (f[k][y] == f[k - 1][y]) continue;
    chosen.push_back(k - 1);
    y &= ~mask[k - 1];
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::size_t> greedy_cover(const CoverInstance& inst) {
  std::vector<bool> covered(inst.suspects.size(), false);
  std::size_t remaining = inst.suspects.size();
  std::vector<std::size_t> chosen;
  while (remaining > 0) {
    std::size_t best = inst.sets.size();
    std::size_t best_gain = 0;
    for (std::size_t j = 0; j < inst.sets.size(); ++j) {
      std::size_t gain = 0;
      for (std::size_t s : inst.sets[j]) gain += covered[s] ? 0 : 1;
      if (gain > best_gain) {
        best = j;
        best_gain = gain;
      }
    }
    if (best == inst.sets.size()) throw std::logic_error("coverable suspects cannot be covered");
    chosen.push_back(best);
    for (std::size_t s : inst.sets[best]) {
      if (!covered[s]) {
        covered[s] = true;
        --remaining;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

ScpiSelection select_scpi(const StrongCorrelationList& list, CoverStrategy strategy) {
  if (list.suspects.empty()) throw Error(ErrorCode::NothingToCover, "no suspicious wires to cover");
  const CoverInstance inst = cover_instance(list);
  ScpiSelection sel;
  for (std::size_t i : list.uncoverable) sel.uncoverable.push_back(list.suspects[i]);

  bool exact = strategy == CoverStrategy::Exact;
  if (strategy == CoverStrategy::Auto) {
    exact = inst.suspects.size() <= kExactMaxSuspects && list.inputs.size() <= kExactMaxInputs;
  }
  sel.chosen = exact ? exact_cover(inst) : greedy_cover(inst);
  sel.optimal = exact;
  for (std::size_t j : sel.chosen) {
    sel.chosen_names.push_back(list.inputs[j]);
    sel.covered = sel.covered + list.covered_by(j);
  }
  return sel;
}

ConstrainedSpec make_constrained_spec(const ScpiSelection& selection, std::span<const std::string> inputs,
                                      const WaveformStore& baseline, std::uint64_t seed,
                                      std::uint64_t cycles, HoldValue hold) {
  ConstrainedSpec out;
  out.spec.seed = seed;
  out.spec.cycles = cycles;
  const std::set<std::string> chosen(selection.chosen_names.begin(), selection.chosen_names.end());
  for (const auto& in : inputs) {
    if (chosen.contains(in)) {
      out.spec.inputs[in] = InputPolicy::FullRandom;
      continue;
    }
    bool one = hold == HoldValue::One;
    if (hold == HoldValue::Majority) {
      const BitVector& row = baseline.row(in);
      one = 2 * row.count() > row.size();
    }
    out.spec.inputs[in] = one ? InputPolicy::Const1 : InputPolicy::Const0;
  }
  if (selection.chosen_names.empty()) {
    out.warnings.push_back("no strongly correlated inputs chosen; every input is held constant");
  }
  return out;
}

ConstrainedSpec make_constrained_spec(const ScpiSelection& selection, const Netlist& netlist,
                                      const WaveformStore& baseline, std::uint64_t seed,
                                      std::uint64_t cycles, HoldValue hold) {
  return make_constrained_spec(selection, std::span<const std::string>(netlist.inputs()), baseline, seed,
                               cycles, hold);
}

TransitionStats transition_stats(const WaveformStore& store, std::span<const std::string> wires) {
  TransitionStats stats;
  if (wires.empty()) return stats;
  double total = 0.0;
  for (const auto& w : wires) {
    const std::size_t tr = count_transitions(store.row(w));
    stats.tr_max = std::max(stats.tr_max, tr);
    total += static_cast<double>(tr);
  }
  stats.tr_ave = total / static_cast<double>(wires.size());
  return stats;
}

TransitionComparison transition_gain(const WaveformStore& before, const WaveformStore& after,
                                     std::span<const std::string> suspects) {
  if (before.cycles() != after.cycles()) {
    throw Error(ErrorCode::CycleMismatch, "stores differ in cycle count: " + std::to_string(before.cycles()) +
                                              " vs " + std::to_string(after.cycles()));
  }
  TransitionComparison cmp;
  cmp.wires.assign(suspects.begin(), suspects.end());
  for (const auto& w : suspects) {
    cmp.before_counts.push_back(count_transitions(before.row(w)));
    cmp.after_counts.push_back(count_transitions(after.row(w)));
  }
  cmp.before = transition_stats(before, suspects);
  cmp.after = transition_stats(after, suspects);
  return cmp;
}

TransitionComparison transition_gain(const WaveformStore& before, const WaveformStore& after,
                                     const SuspectSet& suspects) {
  std::vector<std::string> names;
  for (const auto& rec : suspects.wires) names.push_back(rec.wire);
  return transition_gain(before, after, names);
}

}  // namespace htdet
