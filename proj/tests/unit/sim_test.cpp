/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <map>

#include "relay/sim/matrix.hpp"
#include "relay/sim/output.hpp"
#include "relay/sim/simulation.hpp"
#include "relay/sim/theorems.hpp"

namespace relay::sim {
namespace {

using nlohmann::json;

Scenario parse(json j) {
  j["schema_version"] = 1;
  return Scenario::from_json(j);
}

bool all_applicable_pass(const Report& r, std::string* failed = nullptr) {
  for (const auto& b : r.bounds) {
    if (b.applicable && !b.passed && b.kind != BoundKind::kInformational) {
      if (failed) *failed = b.name;
      return false;
    }
  }
  return true;
}

// ---- randomness and delays ---------------------------------------------------

TEST(DrawBelow, StaysInRangeAndCoversIt) {
  std::mt19937_64 rng(1);
  std::map<std::uint64_t, int> seen;
  for (int i = 0; i < 7000; ++i) {
    auto v = draw_below(rng, 7);
    ASSERT_LT(v, 7u);
    ++seen[v];
  }
  ASSERT_EQ(seen.size(), 7u);
  for (const auto& [_, count] : seen) EXPECT_NEAR(count, 1000, 150);
  EXPECT_EQ(draw_below(rng, 1), 0u);
}

TEST(DelayModel, UniformDrawsStayBelowDelta) {
  DelaySpec spec;
  spec.min = SimTime::ratio(1, 4);
  DelayModel model(spec, SimTime::units(1));
  std::mt19937_64 rng(2);
  SimTime lo = SimTime::units(5), hi{};
  for (int i = 0; i < 10000; ++i) {
    auto d = model.draw(rng);
    ASSERT_LT(d, SimTime::units(1));
    ASSERT_GE(d, spec.min);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  EXPECT_LT(lo, SimTime::ratio(3, 10));
  EXPECT_GT(hi, SimTime::ratio(9, 10));
}

TEST(DelayModel, FixedAndExponential) {
  std::mt19937_64 rng(3);
  DelaySpec fixed;
  fixed.kind = DelaySpec::Kind::kFixed;
  fixed.value = SimTime::ratio(1, 2);
  DelayModel f(fixed, SimTime::units(1));
  for (int i = 0; i < 100; ++i) ASSERT_EQ(f.draw(rng), SimTime::ratio(1, 2));

  DelaySpec expo;
  expo.kind = DelaySpec::Kind::kExponential;
  expo.mean = SimTime::units(1);
  EXPECT_FALSE(expo.synchronous());
  DelayModel e(expo, SimTime::units(1));
  double sum = 0;
  bool beyond_delta = false;
  for (int i = 0; i < 20000; ++i) {
    auto d = e.draw(rng);
    ASSERT_GE(d, SimTime{});
    beyond_delta |= d >= SimTime::units(1);
    sum += d.to_double();
  }
  EXPECT_NEAR(sum / 20000, 1.0, 0.05);
  EXPECT_TRUE(beyond_delta);
}

TEST(EventQueue, OrdersByTimeThenInsertion) {
  EventQueue q;
  q.push(SimTime::units(3), 1);
  q.push(SimTime::units(1), 2);
  q.push(SimTime::units(3), 3);
  q.push(SimTime::units(1), 4);
  std::vector<std::uint32_t> order;
  while (!q.empty()) order.push_back(q.pop().slot);
  EXPECT_EQ(order, (std::vector<std::uint32_t>{2, 4, 1, 3}));
  EXPECT_EQ(q.now(), SimTime::units(3));
  EXPECT_THROW(q.push(SimTime::units(2), 5), std::logic_error);
  q.push(SimTime::units(3), 6);
  EXPECT_EQ(q.pop().slot, 6u);
}

// ---- scenario files -------------------------------------------------------------

TEST(ScenarioFile, RoundTrip) {
  auto s = parse({{"name", "rt"},
                  {"universe", 7},
                  {"block_time", "5/2"},
                  {"delta", "1/2"},
                  {"T", 1},
                  {"rounds", 20},
                  {"beta", "9/4"},
                  {"adversaries", {{{"behavior", "withhold-notarization"}, {"replicas", {1, 2}}, {"delay", "1/2"}}}},
                  {"observers", {{{"name", "o"}, {"T", 0}}}},
                  {"partitions", {{{"start_round", 3}, {"duration", 4}, {"components", {{1, 2, 3}}}}}}});
  EXPECT_EQ(s.block_time, SimTime::ratio(5, 2));
  EXPECT_EQ(s.adversaries.at(0).behavior, Behavior::kWithholdNotarization);
  EXPECT_EQ(s.adversaries.at(0).release_delay, SimTime::ratio(1, 2));
  auto again = Scenario::from_json(s.to_json());
  EXPECT_EQ(again.to_json(), s.to_json());
}

TEST(ScenarioFile, RejectsUnknownFieldsAndVersions) {
  EXPECT_THROW(parse({{"universe", 4}, {"colour", "red"}}), std::invalid_argument);
  EXPECT_THROW(Scenario::from_json(json{{"universe", 4}}), std::invalid_argument);
  EXPECT_THROW(Scenario::from_json(json{{"schema_version", 2}}), std::invalid_argument);
  EXPECT_THROW(parse({{"universe", 4}, {"adversaries", {{{"behavior", "sulk"}, {"replicas", {1}}}}}}), std::invalid_argument);
}

TEST(ScenarioFile, Validation) {
  auto ok = parse({{"universe", 7}});
  EXPECT_NO_THROW(ok.validate());
  auto delay = parse({{"universe", 4}, {"delay", {{"kind", "uniform"}, {"min", 1}}}});
  EXPECT_THROW(delay.validate(), std::invalid_argument);
  auto too_many = parse({{"universe", 7}, {"adversaries", {{{"behavior", "crash"}, {"replicas", {1, 2, 3}}}}}});
  EXPECT_THROW(too_many.validate(), std::invalid_argument);
  too_many.allow_assumption_violation = true;
  EXPECT_NO_THROW(too_many.validate());
  auto both = parse({{"universe", 4},
                     {"partitions", {{{"start", 1}, {"start_round", 2}, {"duration", 1}, {"components", {{1}}}}}}});
  EXPECT_THROW(both.validate(), std::invalid_argument);
  auto short_epoch = parse({{"universe", 4}, {"epoch_length", 8}});  // k = 7 for beta = 3
  EXPECT_THROW(short_epoch.validate(), std::invalid_argument);
  auto threshold = parse({{"universe", 4}, {"threshold", 2}});
  EXPECT_THROW(threshold.validate(), std::invalid_argument);
}

// ---- statistics helpers -------------------------------------------------------------

TEST(GrowthParameter, MatchesIntegerPowers) {
  for (unsigned bits : {1u, 5u, 10u, 40u}) {
    for (auto beta : {mpq_class(3), mpq_class(9, 4), mpq_class(5)}) {
      auto k = growth_parameter(beta, bits);
      mpz_class two = 1;
      two <<= bits;
      mpq_class pk = 1;
      for (std::uint64_t i = 0; i < k; ++i) pk *= beta;
      EXPECT_GE(pk, two);
      EXPECT_LT(pk / beta, two);
    }
  }
  EXPECT_EQ(growth_parameter(3, 10), 7u);
}

TEST(Typicality, MatchesRationalOracle) {
  std::mt19937_64 rng(9);
  const mpq_class p(1, 3), eps(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<bool> seq(40);
    for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = draw_below(rng, 3) == 0;
    const std::uint64_t eta = 10 + trial % 10;
    bool oracle = true;
    for (std::size_t len = eta; len <= seq.size(); ++len) {
      for (std::size_t s = 0; s + len <= seq.size(); ++s) {
        long x = 0;
        for (std::size_t i = s; i < s + len; ++i) x += seq[i];
        mpq_class dev = mpq_class(x) - p * static_cast<long>(len);
        if (abs(dev) >= eps * p * static_cast<long>(len)) oracle = false;
      }
    }
    ASSERT_EQ(is_typical(seq, p, eps, eta), oracle) << trial;
  }
}

// ---- end-to-end runs -------------------------------------------------------------------

TEST(Simulation, AllHonestRunPassesEveryBound) {
  auto s = parse({{"name", "honest"}, {"universe", 4}, {"rounds", 60}, {"seed", 3}});
  auto m = run_scenario(s);
  auto r = assert_theorems(m, s);
  std::string failed;
  EXPECT_TRUE(all_applicable_pass(r, &failed)) << failed;
  EXPECT_TRUE(m.horizon_reached);
  EXPECT_GE(r.at("normal_operation").info["normal_rounds"].get<int>(), 55);
  EXPECT_GT(r.at("finality_latency").checked, 0u);
  EXPECT_TRUE(r.at("consistency").applicable);
}

TEST(Simulation, DeterministicForSameSeed) {
  auto s = parse({{"universe", 5}, {"rounds", 40}, {"seed", 17},
                  {"adversaries", {{{"behavior", "equivocate"}, {"replicas", {2}}}}}});
  auto a = run_scenario(s), b = run_scenario(s);
  EXPECT_EQ(a.rounds_csv(), b.rounds_csv());
  EXPECT_EQ(assert_theorems(a, s).to_json().dump(), assert_theorems(b, s).to_json().dump());
  s.seed = 18;
  EXPECT_NE(run_scenario(s).rounds_csv(), a.rounds_csv());
}

TEST(Simulation, EquivocatorForksWithoutBreakingConsistency) {
  auto s = parse({{"universe", 4}, {"rounds", 80}, {"seed", 1},
                  {"adversaries", {{{"behavior", "equivocate"}, {"replicas", {1}}}}}});
  auto m = run_scenario(s);
  auto r = assert_theorems(m, s);
  std::uint64_t forks = 0;
  for (const auto& row : m.rounds) forks += row.notarized_count >= 2;
  EXPECT_GE(forks, 1u);
  EXPECT_TRUE(r.at("consistency").passed);
  EXPECT_TRUE(m.consistency_violations.empty());
  EXPECT_TRUE(r.safety_ok());
}

TEST(Simulation, BeaconSurvivesAbstainersBelowThreshold) {
  // n = 2t - 1 = 7, f = t - 1 = 3 abstainers.
  auto s = parse({{"universe", 7}, {"rounds", 60}, {"seed", 2}, {"allow_assumption_violation", true},
                  {"adversaries", {{{"behavior", "beacon-abstain"}, {"replicas", {1, 2, 3}}}}}});
  auto m = run_scenario(s);
  for (const auto& row : m.rounds) ASSERT_TRUE(row.xi_min.has_value()) << row.round;
  EXPECT_TRUE(m.horizon_reached);
}

TEST(Simulation, CrashedMinorityKeepsLiveness) {
  auto s = parse({{"universe", 7}, {"rounds", 60}, {"seed", 4},
                  {"adversaries", {{{"behavior", "crash"}, {"replicas", {1, 2}}, {"time", 0}}}}});
  auto m = run_scenario(s);
  auto r = assert_theorems(m, s);
  EXPECT_TRUE(r.at("liveness").passed);
  EXPECT_TRUE(r.at("minimal_progress").applicable);
  EXPECT_TRUE(r.at("minimal_progress").passed);
}

TEST(Simulation, ShortBlockTimeStaysConsistent) {
  auto s = parse({{"universe", 7}, {"rounds", 100}, {"seed", 5}, {"block_time", 1}});
  auto m = run_scenario(s);
  auto r = assert_theorems(m, s);
  EXPECT_FALSE(r.at("normal_operation").applicable);
  EXPECT_TRUE(r.at("consistency").applicable);
  EXPECT_TRUE(r.at("consistency").passed);
}

TEST(Simulation, ZeroTimerObserverViolationIsReported) {
  // Slow unbounded links and a tiny block time leave notarizations of an
  // earlier round in flight when a later one arrives.
  auto s = parse({{"universe", 3}, {"rounds", 300}, {"seed", 1}, {"block_time", "1/10"},
                  {"delay", {{"kind", "exponential"}, {"mean", 5}}},
                  {"observers", {{{"name", "zero"}, {"T", 0}}, {{"name", "z2"}, {"T", 0}}, {{"name", "z3"}, {"T", 0}},
                                 {{"name", "z4"}, {"T", 0}}, {{"name", "z5"}, {"T", 0}}}}});
  auto m = run_scenario(s);
  auto r = assert_theorems(m, s);
  EXPECT_GT(m.low_t_append_only_violations.size(), 0u);
  EXPECT_FALSE(r.at("append_only_low_t").passed);
  EXPECT_FALSE(r.at("append_only_low_t").witnesses.empty());
  EXPECT_TRUE(m.append_only_violations.empty());
}

TEST(Simulation, PartitionDropsAndPausesBeacon) {
  auto s = parse({{"universe", 4}, {"rounds", 30}, {"seed", 6},
                  {"partitions", {{{"start_round", 5}, {"duration", 20}, {"components", {{1, 2}, {3, 4}}}}}}});
  auto m = run_scenario(s);
  auto r = assert_theorems(m, s);
  EXPECT_GT(m.dropped, 0u);
  ASSERT_EQ(m.partitions.size(), 1u);
  EXPECT_TRUE(r.at("beacon_pause").applicable);
  EXPECT_TRUE(r.at("beacon_pause").passed);
  EXPECT_TRUE(r.at("beacon_resume").passed);
  EXPECT_TRUE(m.horizon_reached);
}

TEST(Simulation, MetricsSurviveSerialization) {
  auto s = parse({{"universe", 4}, {"rounds", 25}, {"observers", {{{"name", "ext"}, {"T", 2}}}}});
  auto m = run_scenario(s);
  auto back = Metrics::from_json(json::parse(m.to_json().dump()));
  EXPECT_EQ(back.rounds_csv(), m.rounds_csv());
  EXPECT_EQ(back.observers_csv(), m.observers_csv());
  EXPECT_EQ(assert_theorems(back, s).to_json(), assert_theorems(m, s).to_json());
}

TEST(Simulation, CheckReproducesReportFromDisk) {
  auto s = parse({{"universe", 4}, {"rounds", 25}});
  auto m = run_scenario(s);
  auto r = assert_theorems(m, s);
  auto dir = std::filesystem::temp_directory_path() / "relay-sim-test-run";
  std::filesystem::remove_all(dir);
  write_run(dir, m, r);
  for (auto f : {"rounds.csv", "observers.csv", "metrics.json", "summary.json", "report.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  auto loaded = load_metrics(dir);
  auto again = assert_theorems(loaded, Scenario::from_json(loaded.scenario));
  EXPECT_EQ(again.to_json(), r.to_json());
  std::filesystem::remove_all(dir);
}

TEST(Matrix, ParallelMatchesSerial) {
  auto cells = attack_matrix(30, 2, {0, 5});
  auto a = run_matrix_serial(cells);
  auto b = run_matrix_parallel(cells);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].scenario.name, b[i].scenario.name);
    EXPECT_EQ(a[i].metrics.rounds_csv(), b[i].metrics.rounds_csv());
    EXPECT_EQ(a[i].report.to_json(), b[i].report.to_json());
  }
}

TEST(Matrix, CellsValidate) {
  for (const auto& c : attack_matrix(10, 1)) EXPECT_NO_THROW(c.validate()) << c.name;
  auto ci = ci_matrix(10, 1);
  EXPECT_GT(ci.size(), 50u);
  for (const auto& c : ci) EXPECT_NO_THROW(c.validate()) << c.name;
}

}  // namespace
}  // namespace relay::sim
