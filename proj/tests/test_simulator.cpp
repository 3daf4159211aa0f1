#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "htdet/simulator.hpp"
#include "support.hpp"

using namespace htdet;

namespace {

StimulusSpec spec_for(const Netlist& n, std::uint64_t seed, std::uint64_t cycles,
                      std::map<std::string, InputPolicy> overrides = {}) {
  StimulusSpec s = StimulusSpec::full_random(n, seed, cycles);
  for (const auto& [k, v] : overrides) s.inputs[k] = v;
  return s;
}

}  // namespace

TEST(Simulator, ConstantAnd) {
  const Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(d)\nd = AND(a, b)\n");
  const auto store = simulate(n, spec_for(n, 1, 10, {{"a", InputPolicy::Const1}, {"b", InputPolicy::Const1}}));
  EXPECT_EQ(store.row("d").to_string(), "1111111111");
}

TEST(Simulator, DffLatency) {
  const Netlist n = parse_bench("INPUT(a)\nOUTPUT(q)\nq = DFF(a)\n");
  const auto store = simulate(n, spec_for(n, 1, 4, {{"a", InputPolicy::Const1}}));
  EXPECT_EQ(store.row("q").to_string(), "0111");
}

TEST(Simulator, ToggleFlop) {
  // q' = NOT q: 0101...
  const Netlist n = parse_bench("INPUT(a)\nOUTPUT(q)\nq = DFF(nq)\nnq = NOT(q)\n");
  const auto store = simulate(n, spec_for(n, 1, 130));
  for (std::size_t t = 0; t < 130; ++t) ASSERT_EQ(store.row("q")[t], t % 2 == 1) << t;
}

TEST(Simulator, ShiftRegisterCrossesWordBoundaries) {
  const Netlist n = parse_bench("INPUT(a)\nOUTPUT(q3)\nq1 = DFF(a)\nq2 = DFF(q1)\nq3 = DFF(q2)\n");
  const auto store = simulate(n, spec_for(n, 9, 300));
  for (std::size_t t = 3; t < 300; ++t) ASSERT_EQ(store.row("q3")[t], store.row("a")[t - 3]) << t;
  EXPECT_FALSE(store.row("q3")[0] || store.row("q3")[1] || store.row("q3")[2]);
}

TEST(Simulator, ToyCircuitAndProbability) {
  const Netlist n = fixture::toy_circuit();
  const auto store = simulate(n, spec_for(n, 42, 1'000'000));
  const double p = static_cast<double>(store.row("d").count()) / 1e6;
  EXPECT_NEAR(p, 0.25, 0.01);
}

TEST(Simulator, Errors) {
  const Netlist n = fixture::toy_circuit();
  try {
    simulate(n, spec_for(n, 1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CyclesTooSmall);
  }
  auto bad = spec_for(n, 1, 10);
  bad.inputs["zz"] = InputPolicy::Const0;
  try {
    simulate(n, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSpec);
  }
  auto missing = spec_for(n, 1, 10);
  missing.inputs.erase("a");
  EXPECT_THROW(simulate(n, missing), Error);
}

TEST(Simulator, ExhaustiveToy) {
  const auto store = exhaustive_simulate(fixture::toy_circuit());
  EXPECT_EQ(store.cycles(), 8u);
  EXPECT_EQ(store.row("a").to_string(), "00001111");  // first input is the MSB
  EXPECT_EQ(store.row("c").to_string(), "01010101");
  EXPECT_EQ(store.row("d").count(), 2u);
  EXPECT_EQ(store.row("d").to_string(), "00000011");
}

TEST(Simulator, ExhaustiveBufferAndErrors) {
  const auto store = exhaustive_simulate(parse_bench("INPUT(a)\nOUTPUT(b)\nb = BUFF(a)\n"));
  EXPECT_EQ(store.row("a").to_string(), "01");
  EXPECT_EQ(store.row("b").to_string(), "01");
  try {
    exhaustive_simulate(parse_bench("INPUT(a)\nOUTPUT(q)\nq = DFF(a)\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SequentialNotSupported);
  }
  std::string wide;
  for (int i = 0; i < 21; ++i) wide += "INPUT(i" + std::to_string(i) + ")\n";
  wide += "OUTPUT(o)\no = BUFF(i0)\n";
  try {
    exhaustive_simulate(parse_bench(wide));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyInputs);
  }
}

TEST(Simulator, ConstPolicyDoesNotPerturbOtherStreams) {
  const Netlist n = fixture::toy_circuit();
  const auto all = simulate(n, spec_for(n, 5, 5000));
  const auto held = simulate(n, spec_for(n, 5, 5000, {{"a", InputPolicy::Const0}}));
  EXPECT_EQ(all.row("b"), held.row("b"));
  EXPECT_EQ(all.row("c"), held.row("c"));
  EXPECT_EQ(held.row("a").count(), 0u);
}

TEST(Simulator, SpecJsonRoundTrip) {
  const Netlist n = fixture::toy_circuit();
  const auto spec = spec_for(n, 77, 123, {{"b", InputPolicy::Const1}});
  const std::string text = to_json(spec);
  EXPECT_EQ(stimulus_spec_from_json(text), spec);
  EXPECT_NE(text.find("\"const1\""), std::string::npos);
  EXPECT_THROW(stimulus_spec_from_json("{\"seed\":1}"), Error);
  EXPECT_THROW(stimulus_spec_from_json("{\"seed\":1,\"cycles\":4,\"inputs\":{\"a\":\"sometimes\"}}"), Error);
  EXPECT_NE(digest(spec), digest(spec_for(n, 78, 123)));
}

TEST(Simulator, StoreBinaryRoundTrip) {
  const Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(q)\nx = XOR(a, b)\nq = DFF(x)\n", "seq");
  const auto store = simulate(n, spec_for(n, 3, 1001));
  std::stringstream buf;
  write_store(buf, store);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 4), "HTDW");
  EXPECT_EQ(bytes.size(), serialized_size(store));
  const auto back = read_store(buf);
  EXPECT_EQ(back, store);
  EXPECT_EQ(back.netlist_name, "seq");
  EXPECT_EQ(back.roles(), store.roles());
}

TEST(Simulator, StoreRejectsGarbage) {
  std::stringstream bad("NOPE and some more bytes");
  try {
    read_store(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadStoreFile);
    EXPECT_NE(std::string(e.what()).find("bad magic"), std::string::npos);
  }
  const Netlist n = fixture::toy_circuit();
  std::stringstream buf;
  write_store(buf, simulate(n, spec_for(n, 1, 100)));
  std::stringstream truncated(buf.str().substr(0, buf.str().size() - 5));
  EXPECT_THROW(read_store(truncated), Error);
}

TEST(Simulator, DebugJson) {
  const auto store = exhaustive_simulate(parse_bench("INPUT(a)\nOUTPUT(b)\nb = NOT(a)\n"));
  const std::string j = store_to_debug_json(store);
  EXPECT_NE(j.find("\"a\": \"01\""), std::string::npos) << j;
  EXPECT_NE(j.find("\"b\": \"10\""), std::string::npos) << j;
}

TEST(Simulator, TransitionCoverage) {
  const Netlist n = parse_bench("INPUT(a)\nOUTPUT(o)\nk = AND(a, z)\nz = NOT(a)\no = BUFF(a)\n");
  const auto store = simulate(n, spec_for(n, 1, 200));
  // k = a AND NOT a never toggles; z and o do
  EXPECT_NEAR(transition_coverage(store), 2.0 / 3.0, 1e-12);
}

// Property: the bit-parallel engine matches a gate-by-gate scalar replay on
// random sequential netlists, including across 64-cycle word boundaries.
TEST(SimulatorProperty, MatchesScalarReference) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const Netlist n = fixture::random_netlist(rng, 1 + trial % 5, 10 + trial * 2, 0.25);
    ASSERT_TRUE(validate(n).ok());
    const auto store = simulate(n, StimulusSpec::full_random(n, rng(), 64 * (trial % 3) + 37 + trial));
    const auto ref = fixture::scalar_reference(n, store);
    for (std::size_t w = 0; w < ref.wire_count(); ++w) {
      ASSERT_EQ(store.row(ref.names()[w]), ref.row(w)) << "trial " << trial << " wire " << ref.names()[w];
    }
    EXPECT_TRUE(audit_replay(n, store, 16, 1).ok());
  }
}

TEST(SimulatorProperty, Deterministic) {
  std::mt19937_64 rng(99);
  const Netlist n = fixture::random_netlist(rng, 6, 80, 0.1);
  const auto spec = StimulusSpec::full_random(n, 1234, 5000);
  EXPECT_EQ(simulate(n, spec), simulate(n, spec));
}

TEST(SimulatorProperty, InputMarginals) {
  std::mt19937_64 rng(5);
  const Netlist n = fixture::random_netlist(rng, 16, 4);
  const std::uint64_t N = 200'000;
  const auto store = simulate(n, StimulusSpec::full_random(n, 8, N));
  for (const auto& in : n.inputs()) {
    const double freq = static_cast<double>(store.row(in).count()) / static_cast<double>(N);
    EXPECT_LE(std::abs(freq - 0.5), 4.0 * std::sqrt(0.25 / static_cast<double>(N))) << in;
  }
}

TEST(SimulatorProperty, AuditorCatchesTampering) {
  const Netlist n = fixture::toy_circuit();
  auto store = simulate(n, StimulusSpec::full_random(n, 1, 500));
  const std::size_t d = *store.index("d");
  for (std::size_t t = 0; t < 500; ++t) store.row(d).set(t, !store.row(d)[t]);
  EXPECT_FALSE(audit_replay(n, store, 32, 7).ok());
}
