#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "htdet/cluster.hpp"
#include "support.hpp"

using namespace htdet;
using fixture::record;

namespace {

std::set<std::string> names(const SuspectSet& s) {
  std::set<std::string> out;
  for (const auto& r : s.wires) out.insert(r.wire);
  return out;
}

std::set<std::string> w_range(int lo, int hi) {
  std::set<std::string> out;
  for (int i = lo; i <= hi; ++i) out.insert("W" + std::to_string(i));
  return out;
}

// Partition as a set of wire-name sets plus the noise set, independent of ids.
std::set<std::set<std::string>> partition(const Clustering& c) {
  std::map<int, std::set<std::string>> groups;
  for (std::size_t i = 0; i < c.points.size(); ++i) groups[c.labels[i]].insert(c.points[i].wire);
  std::set<std::set<std::string>> out;
  for (auto& [id, g] : groups) {
    if (id == kNoise) g.insert("<noise>");
    out.insert(g);
  }
  return out;
}

std::vector<EntropyRecord> random_instance(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 0.7);
  std::vector<EntropyRecord> recs;
  for (std::size_t i = 0; i < n; ++i) {
    // quantize so ties and exact-radius distances occur
    const double e = (rng() % 4 == 0) ? std::round(u(rng) * 40) / 40 : u(rng);
    recs.push_back(record("w" + std::to_string(i), e));
  }
  return recs;
}

}  // namespace

TEST(Dbscan, ExampleWiresInEntropySpace) {
  const auto recs = fixture::example_records();
  const auto c = dbscan(recs, {0.05, 2, ClusterSpace::Entropy});
  EXPECT_EQ(names(select_suspects(c)), w_range(1, 7));
  EXPECT_EQ(partition(c), partition(dbscan_reference_oracle(recs, {0.05, 2, ClusterSpace::Entropy})));
}

TEST(Dbscan, ExampleWiresInProbabilitySpace) {
  const auto recs = fixture::example_records();
  const auto c = dbscan(recs, {0.05, 2, ClusterSpace::Probability});
  EXPECT_EQ(names(select_suspects(c)), w_range(1, 10));
  EXPECT_EQ(partition(c), partition(dbscan_reference_oracle(recs, {0.05, 2, ClusterSpace::Probability})));
}

TEST(Dbscan, SinglePoint) {
  const std::vector<EntropyRecord> one{record("x", 0.3)};
  const auto c = dbscan(one, {0.05, 1, ClusterSpace::Entropy});
  EXPECT_EQ(c.cluster_count, 1);
  EXPECT_EQ(c.labels[0], 0);
  EXPECT_EQ(c.roles[0], PointRole::Core);
}

TEST(Dbscan, TwoFarPointsAreNoise) {
  const std::vector<EntropyRecord> two{record("x", 0.1), record("y", 0.3)};
  const auto c = dbscan(two, {0.05, 2, ClusterSpace::Entropy});
  EXPECT_EQ(c.cluster_count, 0);
  EXPECT_EQ(c.labels, (std::vector<int>{kNoise, kNoise}));
  EXPECT_EQ(c.roles[1], PointRole::Noise);
  try {
    select_suspects(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoClusters);
  }
}

TEST(Dbscan, IdenticalPointsFormOneCluster) {
  std::vector<EntropyRecord> same;
  for (int i = 0; i < 6; ++i) same.push_back(record("s" + std::to_string(i), 0.2));
  const auto c = dbscan(same, {0.01, 6, ClusterSpace::Entropy});
  EXPECT_EQ(c.cluster_count, 1);
  EXPECT_EQ(partition(c), partition(dbscan_reference_oracle(same, {0.01, 6, ClusterSpace::Entropy})));
}

TEST(Dbscan, BorderRolesAndTies) {
  // b is within r of a core in each cluster but has too few neighbors to be
  // a core itself; it joins the lower cluster. Binary fractions keep the
  // distances exact.
  std::vector<EntropyRecord> r{record("a1", -0.125), record("a2", -0.0625), record("a3", 0.0),
                               record("b", 0.125),   record("c1", 0.25),    record("c2", 0.3125),
                               record("c3", 0.375)};
  const ClusterParams p{0.125, 4, ClusterSpace::Entropy};
  const auto c = dbscan(r, p);
  EXPECT_EQ(c.cluster_count, 2);
  EXPECT_EQ(c.roles[2], PointRole::Core);
  EXPECT_EQ(c.roles[3], PointRole::Border);
  EXPECT_EQ(c.labels[3], 0);
  EXPECT_EQ(c.labels[4], 1);
  EXPECT_EQ(c.labels, dbscan_reference_oracle(r, p).labels);
}

TEST(Dbscan, InvalidParams) {
  const std::vector<EntropyRecord> one{record("x", 0.3)};
  EXPECT_THROW(dbscan(one, {0.0, 1, ClusterSpace::Entropy}), std::invalid_argument);
  EXPECT_THROW(dbscan(one, {0.1, 0, ClusterSpace::Entropy}), std::invalid_argument);
}

TEST(Suspects, LowestClusterReported) {
  std::vector<EntropyRecord> r;
  for (int i = 0; i < 5; ++i) r.push_back(record("lo" + std::to_string(i), 0.01 * i, 0.001 * i));
  for (int i = 0; i < 5; ++i) r.push_back(record("hi" + std::to_string(i), 0.6 + 0.01 * i, 0.3));
  r.push_back(record("lonely", 0.3, 0.06));
  const auto s = select_suspects(dbscan(r, {0.05, 3, ClusterSpace::Entropy}));
  EXPECT_EQ(s.wires.size(), 5u);
  EXPECT_EQ(s.wires.front().wire, "lo0");
  EXPECT_EQ(s.source_cluster, 0);
  EXPECT_TRUE(s.warnings.empty());
}

TEST(Suspects, SymmetryExclusion) {
  std::vector<EntropyRecord> r{record("a", 0.30, 0.1), record("b", 0.31, 0.1), record("fast", 0.32, 0.9),
                               record("h1", 0.69, 0.5), record("h2", 0.69, 0.5)};
  const auto s = select_suspects(dbscan(r, {0.05, 2, ClusterSpace::Entropy}));
  EXPECT_EQ(names(s), (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(s.symmetry_excluded, (std::vector<std::string>{"fast"}));
}

TEST(Suspects, WholeSpaceClusterWarns) {
  std::vector<EntropyRecord> r{record("a", 0.30), record("b", 0.31), record("c", 0.32)};
  const auto s = select_suspects(dbscan(r, {0.05, 2, ClusterSpace::Entropy}));
  EXPECT_EQ(s.wires.size(), 3u);
  ASSERT_FALSE(s.warnings.empty());
  EXPECT_NE(s.warnings[0].find("no separation"), std::string::npos);
}

TEST(Suspects, LowNoiseEscapeHatch) {
  std::vector<EntropyRecord> r{record("n", 0.0), record("a", 0.20), record("b", 0.21), record("c", 0.22),
                               record("h1", 0.6), record("h2", 0.61), record("h3", 0.62)};
  const auto c = dbscan(r, {0.05, 3, ClusterSpace::Entropy});
  EXPECT_EQ(names(select_suspects(c)), (std::set<std::string>{"a", "b", "c"}));
  EXPECT_EQ(names(select_suspects(c, {true, 0.5})), (std::set<std::string>{"n", "a", "b", "c"}));
}

// Property: the sweep and the O(n^2) closure agree on random instances.
TEST(DbscanProperty, MatchesReferenceOracle) {
  std::mt19937_64 rng(200);
  std::uniform_real_distribution<double> radius(0.005, 0.15);
  for (int trial = 0; trial < 200; ++trial) {
    const auto recs = random_instance(rng, 1 + rng() % 64);
    const ClusterParams p{radius(rng), 1 + rng() % 6, ClusterSpace::Entropy};
    const auto fast = dbscan(recs, p);
    const auto slow = dbscan_reference_oracle(recs, p);
    EXPECT_EQ(fast.labels, slow.labels) << "trial " << trial;
    EXPECT_EQ(fast.roles, slow.roles) << "trial " << trial;
  }
}

// Property: labels follow the wire, not its position in the input.
TEST(DbscanProperty, PermutationInvariant) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto recs = random_instance(rng, 40);
    const ClusterParams p{0.04, 3, ClusterSpace::Entropy};
    const auto c1 = dbscan(recs, p);
    std::map<std::string, int> first;
    for (std::size_t i = 0; i < recs.size(); ++i) first[recs[i].wire] = c1.labels[i];
    std::shuffle(recs.begin(), recs.end(), rng);
    const auto c2 = dbscan(recs, p);
    for (std::size_t i = 0; i < recs.size(); ++i) EXPECT_EQ(c2.labels[i], first[recs[i].wire]);
  }
}

// Property: shrinking r never merges two points that were apart.
TEST(DbscanProperty, ShrinkingRadiusNeverMerges) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const auto recs = random_instance(rng, 30);
    const auto big = dbscan_reference_oracle(recs, {0.08, 3, ClusterSpace::Entropy});
    const auto small = dbscan(recs, {0.04, 3, ClusterSpace::Entropy});
    for (std::size_t i = 0; i < recs.size(); ++i) {
      for (std::size_t j = 0; j < recs.size(); ++j) {
        if (small.labels[i] != kNoise && small.labels[i] == small.labels[j]) {
          EXPECT_NE(big.labels[i], kNoise);
          EXPECT_EQ(big.labels[i], big.labels[j]);
        }
      }
    }
  }
}

// Property: every suspect sits at or below the minimum of every other cluster,
// and respects the symmetry threshold.
TEST(DbscanProperty, SuspectsAreTheBottom) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    auto recs = random_instance(rng, 50);
    for (auto& r : recs) r.p_transition = (rng() % 10 == 0) ? 0.9 : 0.2;
    const auto c = dbscan(recs, {0.03, 2, ClusterSpace::Entropy});
    if (c.cluster_count == 0) continue;
    const auto s = select_suspects(c);
    for (const auto& w : s.wires) {
      EXPECT_LE(w.p_transition, 0.5);
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (c.labels[i] != kNoise && c.labels[i] != s.source_cluster) EXPECT_LE(w.entropy, c.points[i].entropy);
      }
    }
    EXPECT_TRUE(std::is_sorted(s.wires.begin(), s.wires.end(),
                               [](const auto& a, const auto& b) { return a.entropy < b.entropy; }));
  }
}
