#include "htdet/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "htdet/error.hpp"
#include "htdet/waveform.hpp"

namespace htdet {

namespace {

using json = nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  try {
    return std::stoull(s, nullptr, 16);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidSpec, "bad digest '" + s + "' in report");
  }
}

std::string_view space_name(ClusterSpace s) { return s == ClusterSpace::Entropy ? "entropy" : "probability"; }

std::string_view point_role_name(PointRole r) {
  switch (r) {
    case PointRole::Core: return "core";
    case PointRole::Border: return "border";
    case PointRole::Noise: return "noise";
  }
  return "noise";
}

PointRole point_role_from(const std::string& s) {
  if (s == "core") return PointRole::Core;
  if (s == "border") return PointRole::Border;
  return PointRole::Noise;
}

WireRole wire_role_from(const std::string& s) {
  if (s == "PI") return WireRole::PrimaryInput;
  if (s == "POUT") return WireRole::PrimaryOutput;
  return WireRole::Internal;
}

json optional_ratio(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json metrics_json(const EvalMetrics& m) {
  json j;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["tn"] = m.tn;
  j["fn"] = m.fn;
  j["tpr"] = optional_ratio(m.tpr);
  j["tnr"] = optional_ratio(m.tnr);
  j["fpr"] = optional_ratio(m.fpr);
  return j;
}

}  // namespace

std::set<std::string> analysis_universe(const WaveformStore& store) {
  std::set<std::string> universe;
  for (std::size_t w = 0; w < store.wire_count(); ++w) {
    if (store.roles()[w] != WireRole::PrimaryInput) universe.insert(store.names()[w]);
  }
  return universe;
}

DetectionReport run_detection(const WaveformStore& store, const DetectOptions& options) {
  DetectionReport report;
  report.meta.netlist_name = store.netlist_name;
  report.meta.stimulus_digest = store.stimulus_digest;
  report.meta.seed = store.seed;
  report.meta.cycles = store.cycles();
  report.meta.radius = options.params.radius;
  report.meta.min_pts = options.params.min_pts;
  report.meta.space = options.params.space;
  report.meta.include_low_noise = options.suspects.include_low_noise;

  const auto records = entropy_records(store);
  const Clustering clustering = dbscan(records, options.params);
  report.cluster_count = clustering.cluster_count;

  std::set<std::string> suspect_names;
  std::set<std::string> excluded;
  try {
    SuspectSet suspects = select_suspects(clustering, options.suspects);
    report.suspect_cluster = suspects.source_cluster;
    for (const auto& rec : suspects.wires) {
      report.suspects.push_back(rec.wire);
      suspect_names.insert(rec.wire);
    }
    excluded.insert(suspects.symmetry_excluded.begin(), suspects.symmetry_excluded.end());
    report.warnings = std::move(suspects.warnings);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoClusters) throw;
    report.warnings.emplace_back(e.what());
  }

  std::size_t k = 0;
  for (std::size_t w = 0; w < store.wire_count(); ++w) {
    if (store.roles()[w] == WireRole::PrimaryInput) continue;
    const auto& rec = records[k];
    ReportRow row;
    row.wire = rec.wire;
    row.role = store.roles()[w];
    row.entropy = rec.entropy;
    row.p_transition = rec.p_transition;
    row.transitions = count_transitions(store.row(w));
    row.cluster = clustering.labels[k];
    row.point_role = clustering.roles[k];
    row.suspect = suspect_names.contains(rec.wire);
    row.symmetry_excluded = excluded.contains(rec.wire);
    report.rows.push_back(std::move(row));
    ++k;
  }
  return report;
}

SuspectSet suspects_of(const DetectionReport& report) {
  SuspectSet s;
  s.source_cluster = report.suspect_cluster;
  for (const auto& name : report.suspects) {
    auto it = std::find_if(report.rows.begin(), report.rows.end(),
                           [&](const ReportRow& r) { return r.wire == name; });
    if (it == report.rows.end()) {
      throw Error(ErrorCode::MissingWire, "suspect '" + name + "' has no row in the report");
    }
    s.wires.push_back(EntropyRecord{it->wire, it->entropy, it->p_transition});
  }
  for (const auto& r : report.rows) {
    if (r.symmetry_excluded) s.symmetry_excluded.push_back(r.wire);
  }
  s.warnings = report.warnings;
  return s;
}

std::string metrics_to_json(const EvalMetrics& metrics) { return metrics_json(metrics).dump(2) + "\n"; }

std::string to_json(const DetectionReport& report) {
  json j;
  json meta;
  meta["netlist"] = report.meta.netlist_name;
  meta["stimulus_digest"] = hex64(report.meta.stimulus_digest);
  meta["seed"] = report.meta.seed;
  meta["cycles"] = report.meta.cycles;
  meta["radius"] = report.meta.radius;
  meta["min_pts"] = report.meta.min_pts;
  meta["space"] = space_name(report.meta.space);
  meta["include_low_noise"] = report.meta.include_low_noise;
  meta["tool_version"] = report.meta.tool_version;
  meta["timestamp"] = report.meta.timestamp ? json(*report.meta.timestamp) : json(nullptr);
  j["meta"] = std::move(meta);

  json summary;
  summary["wires"] = report.rows.size();
  summary["clusters"] = report.cluster_count;
  summary["suspect_cluster"] = report.suspect_cluster == kNoise ? json(nullptr) : json(report.suspect_cluster);
  summary["suspect_count"] = report.suspects.size();
  summary["warnings"] = report.warnings;
  j["summary"] = std::move(summary);
  j["suspects"] = report.suspects;

  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["wire"] = r.wire;
    row["role"] = to_string(r.role);
    row["entropy"] = r.entropy;
    row["p_transition"] = r.p_transition;
    row["transitions"] = r.transitions;
    row["cluster"] = r.cluster == kNoise ? json(nullptr) : json(r.cluster);
    row["point_role"] = point_role_name(r.point_role);
    row["suspect"] = r.suspect;
    row["symmetry_excluded"] = r.symmetry_excluded;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (report.metrics) j["metrics"] = metrics_json(*report.metrics);
  if (report.testgen) {
    json tg;
    tg["mi_digest"] = hex64(report.testgen->mi_digest);
    tg["chosen"] = report.testgen->chosen;
    tg["uncoverable"] = report.testgen->uncoverable;
    tg["optimal"] = report.testgen->optimal;
    tg["spec_path"] = report.testgen->spec_path;
    j["testgen"] = std::move(tg);
  }
  return j.dump(2) + "\n";
}

DetectionReport detection_report_from_json(std::string_view text) {
  DetectionReport report;
  try {
    const json j = json::parse(text);
    const json& meta = j.at("meta");
    report.meta.netlist_name = meta.at("netlist").get<std::string>();
    report.meta.stimulus_digest = parse_hex64(meta.at("stimulus_digest").get<std::string>());
    report.meta.seed = meta.at("seed").get<std::uint64_t>();
    report.meta.cycles = meta.at("cycles").get<std::uint64_t>();
    report.meta.radius = meta.at("radius").get<double>();
    report.meta.min_pts = meta.at("min_pts").get<std::size_t>();
    report.meta.space = meta.at("space").get<std::string>() == "probability" ? ClusterSpace::Probability
                                                                            : ClusterSpace::Entropy;
    report.meta.include_low_noise = meta.at("include_low_noise").get<bool>();
    report.meta.tool_version = meta.at("tool_version").get<std::string>();
    if (!meta.at("timestamp").is_null()) report.meta.timestamp = meta.at("timestamp").get<std::string>();

    const json& summary = j.at("summary");
    report.cluster_count = summary.at("clusters").get<int>();
    report.suspect_cluster = summary.at("suspect_cluster").is_null() ? kNoise : summary.at("suspect_cluster").get<int>();
    report.warnings = summary.at("warnings").get<std::vector<std::string>>();
    report.suspects = j.at("suspects").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.wire = r.at("wire").get<std::string>();
      row.role = wire_role_from(r.at("role").get<std::string>());
      row.entropy = r.at("entropy").get<double>();
      row.p_transition = r.at("p_transition").get<double>();
      row.transitions = r.at("transitions").get<std::size_t>();
      row.cluster = r.at("cluster").is_null() ? kNoise : r.at("cluster").get<int>();
      row.point_role = point_role_from(r.at("point_role").get<std::string>());
      row.suspect = r.at("suspect").get<bool>();
      row.symmetry_excluded = r.at("symmetry_excluded").get<bool>();
      report.rows.push_back(std::move(row));
    }
    if (j.contains("metrics")) {
      const json& m = j.at("metrics");
      EvalMetrics metrics;
      metrics.tp = m.at("tp").get<std::size_t>();
      metrics.fp = m.at("fp").get<std::size_t>();
      metrics.tn = m.at("tn").get<std::size_t>();
      metrics.fn = m.at("fn").get<std::size_t>();
      if (!m.at("tpr").is_null()) metrics.tpr = m.at("tpr").get<double>();
      if (!m.at("tnr").is_null()) metrics.tnr = m.at("tnr").get<double>();
      if (!m.at("fpr").is_null()) metrics.fpr = m.at("fpr").get<double>();
      report.metrics = metrics;
    }
    if (j.contains("testgen")) {
      const json& tg = j.at("testgen");
      TestgenSection section;
      section.mi_digest = parse_hex64(tg.at("mi_digest").get<std::string>());
      section.chosen = tg.at("chosen").get<std::vector<std::string>>();
      section.uncoverable = tg.at("uncoverable").get<std::vector<std::string>>();
      section.optimal = tg.at("optimal").get<bool>();
      section.spec_path = tg.at("spec_path").get<std::string>();
      report.testgen = std::move(section);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("malformed detection report: ") + e.what());
  }
  return report;
}

std::string entropy_distribution_csv(const DetectionReport& report) {
  std::vector<const ReportRow*> rows;
  for (const auto& r : report.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow* a, const ReportRow* b) {
    if (a->entropy != b->entropy) return a->entropy < b->entropy;
    return a->wire < b->wire;
  });
  std::ostringstream out;
  out.precision(17);
  out << "rank,wire,entropy,p_transition,cluster,suspect\n";
  std::size_t rank = 0;
  for (const ReportRow* r : rows) {
    out << rank++ << "," << r->wire << "," << r->entropy << "," << r->p_transition << ","
        << (r->cluster == kNoise ? std::string("noise") : std::to_string(r->cluster)) << ","
        << (r->suspect ? 1 : 0) << "\n";
  }
  return out.str();
}

std::uint64_t digest(const StrongCorrelationList& list) {
  std::string bytes;
  for (Eigen::Index i = 0; i < list.mi.rows(); ++i) {
    for (Eigen::Index j = 0; j < list.mi.cols(); ++j) {
      const double v = list.mi(i, j);
      bytes.append(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
  return fnv1a64(bytes);
}

}  // namespace htdet
