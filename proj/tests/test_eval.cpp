#include <gtest/gtest.h>

#include <random>

#include "htdet/eval.hpp"

using namespace htdet;

namespace {

std::set<std::string> universe_of(int n) {
  std::set<std::string> u;
  for (int i = 0; i < n; ++i) u.insert("w" + std::to_string(i));
  return u;
}

LabelSet labels_of(std::initializer_list<int> ids) {
  LabelSet l;
  for (int i : ids) l.trojan_wires.insert("w" + std::to_string(i));
  return l;
}

}  // namespace

TEST(Labels, Parse) {
  const auto l = parse_labels("# trojan\n  t1  \n\nt2 # trailing\r\nt1\n", "x.labels");
  EXPECT_EQ(l.trojan_wires, (std::set<std::string>{"t1", "t2"}));
  EXPECT_EQ(l.path, "x.labels");
  EXPECT_NE(l.checksum, 0u);
  try {
    parse_labels("# nothing here\n\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyLabels);
  }
}

TEST(Score, Exact) {
  const auto m = score(std::set<std::string>{"w1", "w2"}, labels_of({1, 2}), universe_of(10));
  EXPECT_EQ(*m.tpr, 1.0);
  EXPECT_EQ(*m.tnr, 1.0);
  EXPECT_EQ(*m.fpr, 0.0);
}

TEST(Score, Arithmetic) {
  // 100 wires, 8 Trojan (w0..w7); suspects catch w0..w4 plus clean w50
  const auto m = score(std::set<std::string>{"w0", "w1", "w2", "w3", "w4", "w50"},
                       labels_of({0, 1, 2, 3, 4, 5, 6, 7}), universe_of(100));
  EXPECT_EQ(m.tp, 5u);
  EXPECT_EQ(m.fp, 1u);
  EXPECT_EQ(m.fn, 3u);
  EXPECT_EQ(m.tn, 91u);
  EXPECT_DOUBLE_EQ(*m.tpr, 0.625);
  EXPECT_DOUBLE_EQ(*m.tnr, 91.0 / 92.0);
  EXPECT_NEAR(*m.fpr, 1.0 / 92.0, 1e-15);
}

TEST(Score, EmptySuspects) {
  const auto m = score(std::set<std::string>{}, labels_of({1}), universe_of(5));
  EXPECT_EQ(*m.tpr, 0.0);
  EXPECT_EQ(*m.tnr, 1.0);
}

TEST(Score, UndefinedRatiosAreNull) {
  const auto m = score(std::set<std::string>{"w0"}, labels_of({0, 1}), universe_of(2));
  EXPECT_FALSE(m.tnr.has_value());
  EXPECT_FALSE(m.fpr.has_value());
  EXPECT_EQ(*m.tpr, 0.5);
}

TEST(Score, OutsideUniverse) {
  try {
    score(std::set<std::string>{}, labels_of({42}), universe_of(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LabelOutsideUniverse);
  }
  EXPECT_THROW(score(std::set<std::string>{"zz"}, labels_of({1}), universe_of(5)), Error);
}

TEST(Score, FromSuspectSet) {
  SuspectSet s;
  s.wires = {EntropyRecord{"w3", 0.0, 0.0}};
  const auto m = score(s, labels_of({3}), universe_of(4));
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.tn, 3u);
}

// Properties: fpr + tnr = 1 exactly, counts partition the universe, and
// adding a true/clean wire moves tpr/tnr only in the allowed direction.
TEST(ScoreProperty, InvariantsAndMonotonicity) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 60);
    const auto u = universe_of(n);
    LabelSet labels;
    std::set<std::string> suspects;
    for (const auto& w : u) {
      if (rng() % 4 == 0) labels.trojan_wires.insert(w);
      if (rng() % 3 == 0) suspects.insert(w);
    }
    if (labels.trojan_wires.empty() || labels.trojan_wires.size() == u.size()) continue;
    const auto m = score(suspects, labels, u);
    EXPECT_EQ(m.tp + m.fp + m.tn + m.fn, u.size());
    EXPECT_EQ(*m.fpr + *m.tnr, 1.0);
    for (const auto& w : u) {
      if (suspects.contains(w)) continue;
      auto more = suspects;
      more.insert(w);
      const auto m2 = score(more, labels, u);
      if (labels.trojan_wires.contains(w)) {
        EXPECT_GE(*m2.tpr, *m.tpr);
      } else {
        EXPECT_LE(*m2.tnr, *m.tnr);
      }
    }
  }
}
