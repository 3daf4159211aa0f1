// Density clustering (DBSCAN) over the one-dimensional space of per-wire
// entropies, and selection of the suspicious low-entropy cluster.

#ifndef HTDET_CLUSTER_HPP
#define HTDET_CLUSTER_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "htdet/infotheory.hpp"

namespace htdet {

/// Which coordinate of a record is clustered. Probability exists for the
/// ablation that clusters raw transition probabilities.
enum class ClusterSpace { Entropy, Probability };

double coordinate(const EntropyRecord& record, ClusterSpace space) noexcept;

struct ClusterParams {
  double radius = 0.05;
  std::size_t min_pts = 5;  // neighborhood count includes the point itself
  ClusterSpace space = ClusterSpace::Entropy;
};

enum class PointRole { Core, Border, Noise };

inline constexpr int kNoise = -1;

/// labels[i] / roles[i] refer to points[i], which keeps the caller's order.
/// Cluster ids are 0..cluster_count-1, numbered bottom-up in the canonical
/// (ascending coordinate, then wire name) order.
struct Clustering {
  std::vector<EntropyRecord> points;
  std::vector<int> labels;
  std::vector<PointRole> roles;
  int cluster_count = 0;
  ClusterParams params;
};

/// Two points are neighbors iff |a - b| <= radius.
bool within_radius(double a, double b, double radius) noexcept;

/// Sorted-sweep DBSCAN. Border points reachable from several clusters join
/// the one with the lowest id. Throws std::invalid_argument on bad params.
Clustering dbscan(std::span<const EntropyRecord> records, const ClusterParams& params);

/// O(n^2) transitive closure of direct density-reachability. Same contract
/// as dbscan; used to cross-check it.
Clustering dbscan_reference_oracle(std::span<const EntropyRecord> records, const ClusterParams& params);

struct SuspectOptions {
  bool include_low_noise = false;  // also report noise below the cluster's max
  double symmetry_threshold = 0.5;  // p_transition above this is excluded
};

struct SuspectSet {
  std::vector<EntropyRecord> wires;  // ascending entropy
  int source_cluster = kNoise;
  std::vector<std::string> symmetry_excluded;
  std::vector<std::string> warnings;
};

/// Reports the cluster with the minimum mean coordinate minus wires whose
/// transition probability exceeds the symmetry threshold. Noise points are
/// never reported unless include_low_noise is set. Throws Error(NoClusters)
/// when every point is noise.
SuspectSet select_suspects(const Clustering& clustering, const SuspectOptions& options = {});

}  // namespace htdet

#endif  // HTDET_CLUSTER_HPP
