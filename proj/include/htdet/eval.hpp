// Scoring a suspect set against ground-truth Trojan wire labels.

#ifndef HTDET_EVAL_HPP
#define HTDET_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "htdet/cluster.hpp"
#include "htdet/error.hpp"

namespace htdet {

struct LabelSet {
  std::set<std::string> trojan_wires;
  std::string path;
  std::uint64_t checksum = 0;  // FNV-1a of the file bytes
};

/// One wire name per line; '#' starts a comment. Throws Error(EmptyLabels).
LabelSet parse_labels(std::string_view text, std::string path = {});
LabelSet read_labels_file(const std::string& path);

/// Ratios are nullopt when their denominator is zero.
struct EvalMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::optional<double> tpr;
  std::optional<double> tnr;
  std::optional<double> fpr;
};

/// `universe` is every wire of W and POUT. Throws Error(LabelOutsideUniverse)
/// when a label or suspect is not in the universe.
EvalMetrics score(const std::set<std::string>& suspects, const LabelSet& labels,
                  const std::set<std::string>& universe);
EvalMetrics score(const SuspectSet& suspects, const LabelSet& labels, const std::set<std::string>& universe);

}  // namespace htdet

#endif  // HTDET_EVAL_HPP
