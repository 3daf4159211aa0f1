#include "htdet/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "htdet/error.hpp"

namespace htdet {

namespace {

void check_params(const ClusterParams& params) {
  if (!(params.radius > 0.0)) throw std::invalid_argument("cluster radius must be positive");
  if (params.min_pts < 1) throw std::invalid_argument("min_pts must be at least 1");
}

// Canonical point order: ascending coordinate, then wire name, then input index.
std::vector<std::size_t> canonical_order(std::span<const EntropyRecord> records, ClusterSpace space) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ca = coordinate(records[a], space);
    const double cb = coordinate(records[b], space);
    if (ca != cb) return ca < cb;
    return records[a].wire < records[b].wire;
  });
  return order;
}

Clustering empty_result(std::span<const EntropyRecord> records, const ClusterParams& params) {
  Clustering c;
  c.points.assign(records.begin(), records.end());
  c.labels.assign(records.size(), kNoise);
  c.roles.assign(records.size(), PointRole::Noise);
  c.params = params;
  return c;
}

}  // namespace

double coordinate(const EntropyRecord& record, ClusterSpace space) noexcept {
  return space == ClusterSpace::Entropy ? record.entropy : record.p_transition;
}

bool within_radius(double a, double b, double radius) noexcept { return std::abs(a - b) <= radius; }

Clustering dbscan(std::span<const EntropyRecord> records, const ClusterParams& params) {
  check_params(params);
  Clustering result = empty_result(records, params);
  const std::size_t n = records.size();
  if (n == 0) return result;

  const auto order = canonical_order(records, params.space);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = coordinate(records[order[i]], params.space);

  // Neighborhood [lo[i], hi[i]) in sorted position space. fl(a - b) is
  // monotone in b, so the predicate partitions the sorted array.
  std::vector<std::size_t> lo(n);
  std::vector<std::size_t> hi(n);
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = static_cast<std::size_t>(
        std::partition_point(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i),
                             [&](double v) { return !within_radius(x[i], v, params.radius); }) -
        x.begin());
    hi[i] = static_cast<std::size_t>(
        std::partition_point(x.begin() + static_cast<std::ptrdiff_t>(i), x.end(),
                             [&](double v) { return within_radius(x[i], v, params.radius); }) -
        x.begin());
    core[i] = hi[i] - lo[i] >= params.min_pts;
  }

  // Consecutive core points within the radius share a cluster.
  std::vector<int> label(n, kNoise);
  int clusters = 0;
  std::size_t prev_core = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    if (prev_core == n || !within_radius(x[i], x[prev_core], params.radius)) ++clusters;
    label[i] = clusters - 1;
    prev_core = i;
  }
  // Border points take the lowest-id cluster among cores in their neighborhood.
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    for (std::size_t j = lo[i]; j < hi[i]; ++j) {
      if (core[j]) {
        label[i] = label[j];
        break;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = order[i];
    result.labels[p] = label[i];
    result.roles[p] = core[i] ? PointRole::Core : (label[i] == kNoise ? PointRole::Noise : PointRole::Border);
  }
  result.cluster_count = clusters;
  return result;
}

Clustering dbscan_reference_oracle(std::span<const EntropyRecord> records, const ClusterParams& params) {
  check_params(params);
  Clustering result = empty_result(records, params);
  const std::size_t n = records.size();
  auto at = [&](std::size_t i) { return coordinate(records[i], params.space); };

  std::vector<std::vector<std::size_t>> neighbors(n);
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (within_radius(at(i), at(j), params.radius)) neighbors[i].push_back(j);
    }
    core[i] = neighbors[i].size() >= params.min_pts;
  }

  // Closure of direct density-reachability from each unvisited core point.
  std::vector<int> component(n, kNoise);
  int components = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!core[seed] || component[seed] != kNoise) continue;
    std::vector<std::size_t> frontier{seed};
    component[seed] = components;
    while (!frontier.empty()) {
      const std::size_t p = frontier.back();
      frontier.pop_back();
      for (std::size_t q : neighbors[p]) {
        if (core[q] && component[q] == kNoise) {
          component[q] = components;
          frontier.push_back(q);
        }
      }
    }
    ++components;
  }

  // Renumber components bottom-up by their canonically smallest core.
  const auto order = canonical_order(records, params.space);
  std::vector<int> renumber(static_cast<std::size_t>(components), kNoise);
  int next = 0;
  for (std::size_t p : order) {
    if (core[p] && renumber[static_cast<std::size_t>(component[p])] == kNoise) {
      renumber[static_cast<std::size_t>(component[p])] = next++;
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (core[p]) {
      result.labels[p] = renumber[static_cast<std::size_t>(component[p])];
      result.roles[p] = PointRole::Core;
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (core[p]) continue;
    int best = kNoise;
    for (std::size_t q : neighbors[p]) {
      if (!core[q]) continue;
      const int id = result.labels[q];
      if (best == kNoise || id < best) best = id;
    }
    result.labels[p] = best;
    result.roles[p] = best == kNoise ? PointRole::Noise : PointRole::Border;
  }
  result.cluster_count = next;
  return result;
}

SuspectSet select_suspects(const Clustering& clustering, const SuspectOptions& options) {
  if (clustering.cluster_count == 0) {
    throw Error(ErrorCode::NoClusters,
                "every point is noise; radius/min_pts are too strict for this data");
  }
  const ClusterSpace space = clustering.params.space;
  std::vector<double> sum(static_cast<std::size_t>(clustering.cluster_count), 0.0);
  std::vector<std::size_t> count(sum.size(), 0);
  for (std::size_t i = 0; i < clustering.points.size(); ++i) {
    const int id = clustering.labels[i];
    if (id == kNoise) continue;
    sum[static_cast<std::size_t>(id)] += coordinate(clustering.points[i], space);
    ++count[static_cast<std::size_t>(id)];
  }
  int best = 0;
  for (int id = 1; id < clustering.cluster_count; ++id) {
    const auto k = static_cast<std::size_t>(id);
    if (sum[k] / static_cast<double>(count[k]) <
        sum[static_cast<std::size_t>(best)] / static_cast<double>(count[static_cast<std::size_t>(best)])) {
      best = id;
    }
  }

  SuspectSet out;
  out.source_cluster = best;
  double cluster_max = -1.0;
  std::size_t noise = 0;
  for (std::size_t i = 0; i < clustering.points.size(); ++i) {
    if (clustering.labels[i] == best) {
      cluster_max = std::max(cluster_max, coordinate(clustering.points[i], space));
    }
    if (clustering.labels[i] == kNoise) ++noise;
  }
  for (std::size_t i = 0; i < clustering.points.size(); ++i) {
    const auto& rec = clustering.points[i];
    const bool member = clustering.labels[i] == best;
    const bool low_noise = options.include_low_noise && clustering.labels[i] == kNoise &&
                           coordinate(rec, space) < cluster_max;
    if (!member && !low_noise) continue;
    if (rec.p_transition > options.symmetry_threshold) {
      out.symmetry_excluded.push_back(rec.wire);
      continue;
    }
    out.wires.push_back(rec);
  }
  std::sort(out.wires.begin(), out.wires.end(), [](const EntropyRecord& a, const EntropyRecord& b) {
    if (a.entropy != b.entropy) return a.entropy < b.entropy;
    return a.wire < b.wire;
  });
  std::sort(out.symmetry_excluded.begin(), out.symmetry_excluded.end());

  if (clustering.cluster_count == 1 && noise == 0) {
    out.warnings.push_back("no separation: every point fell into a single cluster");
  }
  if (out.wires.empty()) {
    out.warnings.push_back("the lowest cluster contains only symmetry-excluded wires");
  }
  return out;
}

}  // namespace htdet
