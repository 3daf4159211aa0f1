#include "htdet/eval.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "htdet/error.hpp"
#include "htdet/simulator.hpp"

namespace htdet {

LabelSet parse_labels(std::string_view text, std::string path) {
  LabelSet labels;
  labels.path = std::move(path);
  labels.checksum = fnv1a64(text);
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (!line.empty()) labels.trojan_wires.emplace(line);
  }
  if (labels.trojan_wires.empty()) throw Error(ErrorCode::EmptyLabels, "labels file lists no Trojan wires");
  return labels;
}

LabelSet read_labels_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open labels file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_labels(buf.str(), path);
}

EvalMetrics score(const std::set<std::string>& suspects, const LabelSet& labels,
                  const std::set<std::string>& universe) {
  for (const auto& w : labels.trojan_wires) {
    if (!universe.contains(w)) {
      throw Error(ErrorCode::LabelOutsideUniverse, "labelled wire '" + w + "' is not an internal wire or output");
    }
  }
  for (const auto& w : suspects) {
    if (!universe.contains(w)) {
      throw Error(ErrorCode::LabelOutsideUniverse, "suspect '" + w + "' is not an internal wire or output");
    }
  }
  EvalMetrics m;
  for (const auto& w : universe) {
    const bool trojan = labels.trojan_wires.contains(w);
    const bool flagged = suspects.contains(w);
    if (trojan && flagged) ++m.tp;
    if (trojan && !flagged) ++m.fn;
    if (!trojan && flagged) ++m.fp;
    if (!trojan && !flagged) ++m.tn;
  }
  if (m.tp + m.fn > 0) m.tpr = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  if (m.tn + m.fp > 0) {
    m.tnr = static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp);
    m.fpr = 1.0 - *m.tnr;
  }
  return m;
}

EvalMetrics score(const SuspectSet& suspects, const LabelSet& labels, const std::set<std::string>& universe) {
  std::set<std::string> names;
  for (const auto& rec : suspects.wires) names.insert(rec.wire);
  return score(names, labels, universe);
}

}  // namespace htdet
