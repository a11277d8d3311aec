/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "relay/codec.hpp"
#include "relay/committee/group_size.hpp"
#include "relay/crypto/threshold.hpp"
#include "relay/sim/matrix.hpp"
#include "relay/sim/simulation.hpp"
#include "relay/sim/theorems.hpp"

namespace {

using namespace relay;
using sim::Scenario;

// Pinned limits.
constexpr double kTableSeconds = 60;
constexpr double kUniquenessSeconds = 5;
constexpr double kMainTheoremSeconds = 10;
constexpr double kAttackMatrixSeconds = 120;
constexpr std::uint64_t kMainTheoremRounds = 200;
constexpr std::uint64_t kCiRounds = 200;
constexpr std::uint64_t kAttackRounds = 1000;
constexpr std::uint64_t kGrowthRounds = 5000;
constexpr unsigned kGrowthRhoLog2 = 10;
constexpr std::uint64_t kQualityRounds = 2000;
constexpr std::uint64_t kQualityWindow = 100;
const mpq_class kQualityEpsilon(1, 5);
constexpr std::size_t kUniquenessMessages = 20;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<ReplicaId> ids(std::uint32_t lo, std::uint32_t hi) {
  std::vector<ReplicaId> out;
  for (auto i = lo; i <= hi; ++i) out.push_back(replica_id(i));
  return out;
}

Scenario base(const std::string& name, std::uint32_t universe, std::uint64_t rounds) {
  Scenario s;
  s.name = name;
  s.universe = universe;
  s.rounds = rounds;
  s.delta = SimTime::units(1);
  s.block_time = SimTime::units(3);
  s.T = SimTime::units(2);
  s.seed = 1;
  return s;
}

// ---- criteria ---------------------------------------------------------------------

Outcome group_size_tables() {
  const std::uint64_t hyper[12] = {405, 169, 111, 651, 277, 181, 811, 349, 227, 1255, 555, 365};
  const std::uint64_t binom[12] = {423, 173, 111, 701, 287, 185, 887, 363, 235, 1447, 593, 383};
  auto t0 = std::chrono::steady_clock::now();
  auto h = committee::solve_parallel(committee::standard_grid(10000));
  auto b = committee::solve_parallel(committee::standard_grid(std::nullopt));
  double secs = seconds_since(t0);
  int exact = 0;
  for (std::size_t i = 0; i < 12 && i < h.size() && i < b.size(); ++i) {
    exact += h[i].n == hyper[i];
    exact += b[i].n == binom[i];
  }
  return {exact == 24 && secs < kTableSeconds, fmt("%d/24 exact, %.2fs (limit %.0fs)", exact, secs, kTableSeconds)};
}

Outcome uniqueness() {
  const auto& g = crypto::GroupParams::toy();
  auto t0 = std::chrono::steady_clock::now();
  auto scheme = crypto::SchemeParams::majority(g, 5);
  std::vector<crypto::Dealing> dealings;
  crypto::Scalar secret = g.scalar(0);
  for (std::uint32_t d = 1; d <= 5; ++d) {
    auto out = crypto::deal(scheme, d, crypto::prg(crypto::Seed::from_digest(crypto::hash(std::string_view("A2"))), d));
    secret = g.add(secret, out.polynomial.coefficients.at(0));
    dealings.push_back(std::move(out.dealing));
  }
  auto dkg = crypto::complete_dkg(scheme, dealings);
  crypto::GroupKeys keys(g, dkg.verification, 5);

  std::mt19937_64 rng(20);
  int equal = 0, total = 0;
  for (std::size_t k = 0; k < kUniquenessMessages; ++k) {
    Bytes m(32);
    for (auto& byte : m) byte = static_cast<std::uint8_t>(rng());
    // Oracle: H(m)^s with s the sum of the dealers' constant terms.
    const auto expected = g.pow(g.hash_to_group(m), secret);
    std::vector<crypto::SignatureShare> shares;
    for (const auto& sk : dkg.shares) shares.push_back(crypto::sign_share(m, sk, keys));
    for (int mask = 0; mask < 32; ++mask) {
      if (__builtin_popcount(mask) != 3) continue;
      std::vector<crypto::SignatureShare> pick;
      for (int i = 0; i < 5; ++i) {
        if (mask & (1 << i)) pick.push_back(shares[i]);
      }
      auto sigma = crypto::recover(g, scheme.threshold, pick);
      ++total;
      equal += sigma.value == expected && crypto::verify_group(m, keys, sigma);
    }
  }
  double secs = seconds_since(t0);
  return {equal == 200 && total == 200 && secs < kUniquenessSeconds,
          fmt("%d/%d equal, %.2fs (limit %.0fs)", equal, total, secs, kUniquenessSeconds)};
}

Outcome main_theorem() {
  auto s = base("main-theorem", 7, kMainTheoremRounds);
  s.observers.push_back({"external-2d", SimTime::units(2), finality::Mode::kTimer});
  auto t0 = std::chrono::steady_clock::now();
  auto m = sim::run_scenario(s);
  auto r = sim::assert_theorems(m, s);
  double secs = seconds_since(t0);
  const auto& normal = r.at("normal_operation");
  const auto& latency = r.at("finality_latency");
  const auto normal_rounds = normal.info.value("normal_rounds", std::uint64_t{0});
  std::uint64_t short_chains = 0;
  for (const auto& o : m.observers) short_chains += o.chain.size() < kMainTheoremRounds - 2;
  const bool ok = normal.applicable && normal.passed && normal_rounds == kMainTheoremRounds && latency.applicable &&
                  latency.passed && latency.failures == 0 && r.safety_ok() && short_chains == 0 &&
                  secs < kMainTheoremSeconds;
  return {ok, fmt("normal %llu/%llu, latency checks %llu failures %llu over %zu observers, %.2fs (limit %.0fs)",
                  (unsigned long long)normal_rounds, (unsigned long long)kMainTheoremRounds,
                  (unsigned long long)latency.checked, (unsigned long long)latency.failures, m.observers.size(), secs,
                  kMainTheoremSeconds)};
}

Outcome minimal_progress() {
  std::vector<Scenario> cells;
  for (auto& c : sim::ci_matrix(kCiRounds, 1)) {
    if (c.block_time == c.delta * 3) cells.push_back(std::move(c));
  }
  auto results = sim::run_matrix_parallel(cells);
  std::uint64_t applicable = 0, checked = 0, failures = 0;
  std::string first_failure;
  for (const auto& cell : results) {
    const auto& b = cell.report.at("minimal_progress");
    if (!b.applicable) continue;
    ++applicable;
    checked += b.checked;
    failures += b.failures;
    if (b.failures && first_failure.empty()) first_failure = " first failing cell " + cell.scenario.name;
  }
  return {applicable > 0 && checked > 0 && failures == 0,
          fmt("%llu/%zu cells applicable, %llu rounds checked, %llu violations%s", (unsigned long long)applicable,
              results.size(), (unsigned long long)checked, (unsigned long long)failures, first_failure.c_str())};
}

Outcome consistency_under_attack() {
  auto cells = sim::attack_matrix(kAttackRounds, 1, {0, 1, 5});
  auto t0 = std::chrono::steady_clock::now();
  auto results = sim::run_matrix_parallel(cells);
  double secs = seconds_since(t0);
  std::uint64_t violations = 0, checked = 0, applicable = 0;
  for (const auto& cell : results) {
    const auto& b = cell.report.at("consistency");
    applicable += b.applicable;
    checked += cell.metrics.finalize_events_checked;
    violations += cell.metrics.consistency_violations.size() + cell.metrics.append_only_violations.size();
  }
  return {applicable == results.size() && violations == 0 && secs < kAttackMatrixSeconds,
          fmt("%zu cells x %llu rounds, %llu finalize events, %llu violations, %.2fs (limit %.0fs)", results.size(),
              (unsigned long long)kAttackRounds, (unsigned long long)checked, (unsigned long long)violations, secs,
              kAttackMatrixSeconds)};
}

Outcome chain_growth() {
  auto s = base("growth", 9, kGrowthRounds);
  s.beta = 3;
  s.growth_rho_log2 = kGrowthRhoLog2;
  s.allow_assumption_violation = true;  // f = |U| / 3 exactly
  s.adversaries.push_back({sim::Behavior::kEquivocate, ids(1, 3), {}, {}});
  auto m = sim::run_scenario(s);
  auto r = sim::assert_theorems(m, s);
  const auto& b = r.at("chain_growth");
  std::uint64_t adv_top = 0;
  for (const auto& row : m.rounds) adv_top += !row.top_rank_honest;
  mpz_class scaled = static_cast<unsigned long>(b.failures);
  scaled <<= kGrowthRhoLog2;
  const bool ok = b.applicable && b.checked >= kGrowthRounds - 1 && scaled <= static_cast<unsigned long>(b.checked);
  return {ok, fmt("k=%llu, %llu/%llu rounds below r-k (allowed %llu), adversarial top rank %.3f",
                  (unsigned long long)b.info.value("k", 0), (unsigned long long)b.failures,
                  (unsigned long long)b.checked, (unsigned long long)(b.checked >> kGrowthRhoLog2),
                  double(adv_top) / double(m.rounds.size()))};
}

Outcome chain_quality() {
  auto s = base("quality", 9, kQualityRounds);
  s.beta = 3;
  s.allow_assumption_violation = true;
  s.quality_window = kQualityWindow;
  s.quality_epsilon = kQualityEpsilon;
  s.adversaries.push_back({sim::Behavior::kSelfishChain, ids(1, 3), {}, {}});
  auto m = sim::run_scenario(s);
  auto r = sim::assert_theorems(m, s);
  const auto& b = r.at("chain_quality");
  const mpq_class mu = (1 - mpq_class(1, 3)) * (1 - kQualityEpsilon);
  const auto worst = b.info.value("worst_window_honest", std::uint64_t{0});
  const bool ok = b.applicable && b.checked > 0 && b.passed &&
                  mpq_class(static_cast<unsigned long>(worst)) >= mu * static_cast<unsigned long>(kQualityWindow);
  return {ok, fmt("%llu windows, worst %llu/%llu honest (need %.2f)", (unsigned long long)b.checked,
                  (unsigned long long)worst, (unsigned long long)kQualityWindow,
                  mpq_class(mu * static_cast<unsigned long>(kQualityWindow)).get_d())};
}

Outcome beacon_split() {
  std::string detail;
  bool ok = true;
  for (auto [label, cut] : {std::pair<const char*, std::uint32_t>{"50/50", 5}, {"70/30", 7}}) {
    auto s = base(std::string("split-") + label, 10, 60);
    s.partitions.push_back(sim::PartitionSpec{std::nullopt, 10, SimTime::units(40), {ids(1, cut), ids(cut + 1, 10)}});
    auto m = sim::run_scenario(s);
    auto r = sim::assert_theorems(m, s);
    const auto& pause = r.at("beacon_pause");
    const auto& resume = r.at("beacon_resume");
    bool stalls_match = !m.partitions.empty();
    std::string comps;
    for (const auto& c : m.partitions.empty() ? std::vector<sim::ComponentBeacon>{} : m.partitions[0].components) {
      comps += fmt(" %zu:%zu", c.members.size(), c.productions.size());
    }
    // 50/50: both stall. 70/30: only the majority keeps producing.
    if (stalls_match) {
      const auto& cs = m.partitions[0].components;
      const bool majority_runs = cut == 7 && cs.size() == 2 && cs[0].productions.size() > 2;
      stalls_match = cut == 5 || majority_runs;
    }
    const bool part_ok = pause.applicable && pause.passed && resume.passed && stalls_match && m.horizon_reached;
    ok = ok && part_ok;
    detail += fmt("%s%s pause %s resume %s (component:productions%s)", detail.empty() ? "" : "; ", label,
                  pause.passed ? "ok" : "FAIL", resume.passed ? "ok" : "FAIL", comps.c_str());
  }
  return {ok, detail};
}

Outcome determinism() {
  auto s = base("determinism", 7, 150);
  s.adversaries.push_back({sim::Behavior::kWithholdNotarization, ids(1, 2), SimTime::units(1), {}});
  s.observers.push_back({"low", SimTime::units(1), finality::Mode::kTimer});
  s.partitions.push_back(sim::PartitionSpec{std::nullopt, 30, SimTime::units(20), {ids(1, 4), ids(5, 7)}});
  auto digest = [&] {
    auto m = sim::run_scenario(s);
    auto r = sim::assert_theorems(m, s);
    return std::pair{crypto::hash(m.rounds_csv() + m.observers_csv()), crypto::hash(r.to_json().dump())};
  };
  auto a = digest(), b = digest();
  return {a == b, fmt("metrics %s.. report %s..", a.first.hex().substr(0, 16).c_str(),
                      a.second.hex().substr(0, 16).c_str())};
}

Outcome dkg_correctness() {
  const auto& g = crypto::GroupParams::toy();
  int good = 0;
  for (std::size_t n : {3u, 5u, 7u}) {
    auto scheme = crypto::SchemeParams::majority(g, n);
    const std::uint32_t bad = 2;
    for (bool with_bad : {false, true}) {
      std::vector<crypto::Dealing> dealings;
      std::vector<crypto::DealerPolynomial> polys;
      for (std::uint32_t d = 1; d <= n; ++d) {
        auto out = crypto::deal(scheme, d, crypto::prg(crypto::Seed::from_digest(crypto::hash(std::string_view("A10"))), d));
        if (with_bad && d == bad) {
          out.dealing.shares[0] = g.add(out.dealing.shares[0], g.scalar(1));
        } else {
          polys.push_back(out.polynomial);
        }
        dealings.push_back(std::move(out.dealing));
      }
      auto result = crypto::complete_dkg(scheme, dealings);
      // Oracle: f = sum of the qualified dealers' polynomials.
      auto f = [&](std::uint64_t x) {
        crypto::Scalar acc = g.scalar(0);
        for (const auto& p : polys) {
          crypto::Scalar pow = g.scalar(1);
          for (const auto& c : p.coefficients) {
            acc = g.add(acc, g.mul(c, pow));
            pow = g.mul(pow, g.scalar(x));
          }
        }
        return acc;
      };
      bool ok = result.disqualified == (with_bad ? std::set<std::uint32_t>{bad} : std::set<std::uint32_t>{});
      ok = ok && result.verification.public_key() == g.exp_g(f(0));
      for (std::uint32_t i = 1; i <= n; ++i) ok = ok && result.shares[i - 1].scalar == f(i);
      crypto::GroupKeys keys(g, result.verification, n);
      auto m = to_bytes("A10 message");
      std::vector<crypto::SignatureShare> shares;
      for (std::size_t i = n - scheme.threshold; i < n; ++i) shares.push_back(crypto::sign_share(m, result.shares[i], keys));
      auto sigma = crypto::recover(g, scheme.threshold, shares);
      ok = ok && crypto::verify_group(m, keys, sigma) && sigma.value == g.pow(g.hash_to_group(m), f(0));
      good += ok;
    }
  }
  return {good == 6, fmt("%d/6 (n in {3,5,7}, with and without a bad dealer)", good)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"A1 group-size tables", group_size_tables},
      {"A2 signature uniqueness", uniqueness},
      {"A3 normal operation and finality", main_theorem},
      {"A4 minimal progress", minimal_progress},
      {"A5 consistency under attack", consistency_under_attack},
      {"A6 chain growth", chain_growth},
      {"A7 chain quality", chain_quality},
      {"A8 beacon under partition", beacon_split},
      {"A9 determinism", determinism},
      {"A10 DKG correctness", dkg_correctness},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%-36s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
