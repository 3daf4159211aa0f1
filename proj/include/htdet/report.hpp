// Detection reports: the end-to-end clustering run and its JSON/CSV forms.

#ifndef HTDET_REPORT_HPP
#define HTDET_REPORT_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "htdet/cluster.hpp"
#include "htdet/eval.hpp"
#include "htdet/simulator.hpp"
#include "htdet/testgen.hpp"

namespace htdet {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct ReportRow {
  std::string wire;
  WireRole role = WireRole::Internal;
  double entropy = 0.0;
  double p_transition = 0.0;
  std::size_t transitions = 0;
  int cluster = kNoise;
  PointRole point_role = PointRole::Noise;
  bool suspect = false;
  bool symmetry_excluded = false;
};

struct RunMetadata {
  std::string netlist_name;
  std::uint64_t stimulus_digest = 0;
  std::uint64_t seed = 0;
  std::uint64_t cycles = 0;
  double radius = 0.05;
  std::size_t min_pts = 5;
  ClusterSpace space = ClusterSpace::Entropy;
  bool include_low_noise = false;
  std::string tool_version{kToolVersion};
  std::optional<std::string> timestamp;
};

struct TestgenSection {
  std::uint64_t mi_digest = 0;
  std::vector<std::string> chosen;
  std::vector<std::string> uncoverable;
  bool optimal = false;
  std::string spec_path;
};

struct DetectionReport {
  RunMetadata meta;
  std::vector<ReportRow> rows;      // one per wire of W and POUT, store order
  std::vector<std::string> suspects;  // ascending entropy
  int suspect_cluster = kNoise;
  int cluster_count = 0;
  std::vector<std::string> warnings;
  std::optional<EvalMetrics> metrics;
  std::optional<TestgenSection> testgen;
};

struct DetectOptions {
  ClusterParams params;
  SuspectOptions suspects;
};

/// Entropy records, clustering and suspect selection over a store. When
/// every point is noise the report has no suspects and carries a warning.
DetectionReport run_detection(const WaveformStore& store, const DetectOptions& options);

/// W and POUT wire names of a store.
std::set<std::string> analysis_universe(const WaveformStore& store);

/// Restores the suspect set (records in ascending entropy) from a report.
SuspectSet suspects_of(const DetectionReport& report);

std::string to_json(const DetectionReport& report);
DetectionReport detection_report_from_json(std::string_view json);

std::string metrics_to_json(const EvalMetrics& metrics);

/// Sorted entropy distribution: rank,wire,entropy,p_transition,cluster,suspect
std::string entropy_distribution_csv(const DetectionReport& report);

/// Digest of an MI matrix (bytes of its entries, row-major).
std::uint64_t digest(const StrongCorrelationList& list);

}  // namespace htdet

#endif  // HTDET_REPORT_HPP
