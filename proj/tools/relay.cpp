/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

// relay: command-line front end for the simulator and the offline tools.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "relay/codec.hpp"
#include "relay/committee/group_size.hpp"
#include "relay/crypto/threshold.hpp"
#include "relay/sim/matrix.hpp"
#include "relay/sim/output.hpp"
#include "relay/sim/simulation.hpp"

namespace {

using namespace relay;
using nlohmann::json;

constexpr int kExitSafety = 1;
constexpr int kExitUsage = 2;

void print_report(const sim::Report& report) {
  for (const auto& b : report.bounds) {
    const char* status = !b.applicable ? "n/a " : (b.passed ? "PASS" : "FAIL");
    std::printf("  %-28s %-13s %s  checked=%llu failures=%llu\n", b.name.c_str(), sim::kind_name(b.kind).c_str(),
                status, static_cast<unsigned long long>(b.checked), static_cast<unsigned long long>(b.failures));
  }
  std::printf("safety: %s\n", report.safety_ok() ? "ok" : "VIOLATED");
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed, const std::string& out) {
  auto scenario = sim::load_scenario(scenario_path);
  if (seed) scenario.seed = *seed;
  auto started = std::chrono::steady_clock::now();
  auto metrics = sim::run_scenario(scenario);
  auto report = sim::assert_theorems(metrics, scenario);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  sim::write_run(out, metrics, report);
  std::printf("%s: %zu rounds, %llu events, %.2fs -> %s\n", scenario.name.c_str(), metrics.rounds.size(),
              static_cast<unsigned long long>(metrics.events), secs, out.c_str());
  print_report(report);
  return report.safety_ok() ? 0 : kExitSafety;
}

int cmd_check(const std::string& dir) {
  auto metrics = sim::load_metrics(dir);
  auto scenario = sim::Scenario::from_json(metrics.scenario);
  auto report = sim::assert_theorems(metrics, scenario);
  print_report(report);
  return report.safety_ok() ? 0 : kExitSafety;
}

std::string cell(const std::optional<std::uint64_t>& n) { return n ? std::to_string(*n) : "none"; }

int cmd_groupsize(const std::string& beta, unsigned rho_log2, std::optional<std::uint64_t> population, bool table,
                  bool serial, bool as_json) {
  if (table) {
    json out = json::array();
    for (std::optional<std::uint64_t> pop : {std::optional<std::uint64_t>(10000), std::optional<std::uint64_t>()}) {
      auto grid = committee::standard_grid(pop);
      auto answers = serial ? committee::solve_serial(grid) : committee::solve_parallel(grid);
      if (!as_json) {
        std::printf("%s\n", pop ? "population N = 10000 (hypergeometric)" : "unbounded population (binomial)");
        std::printf("  rho      beta=3  beta=4  beta=5\n");
      }
      for (std::size_t row = 0; row < answers.size() / 3; ++row) {
        if (!as_json) std::printf("  2^-%-5u", answers[row * 3].query.rho_log2);
        for (std::size_t c = 0; c < 3; ++c) {
          const auto& a = answers[row * 3 + c];
          if (!as_json) std::printf("%8s", cell(a.n).c_str());
          out.push_back({{"beta", a.query.beta.get_str()},
                         {"rho_log2", a.query.rho_log2},
                         {"population", a.query.population ? json(*a.query.population) : json(nullptr)},
                         {"n", a.n ? json(*a.n) : json(nullptr)}});
        }
        if (!as_json) std::printf("\n");
      }
    }
    if (as_json) std::cout << out.dump(2) << "\n";
    return 0;
  }
  const auto b = committee::parse_rational(beta);
  const auto rho = committee::rho_from_log2(rho_log2);
  std::optional<std::uint64_t> n =
      population ? committee::min_group_size_hyper(b, rho, *population) : committee::min_group_size_binom(b, rho);
  std::printf("%s\n", cell(n).c_str());
  return 0;
}

int cmd_dkg_demo(std::size_t n, std::size_t t, std::optional<std::uint32_t> bad_dealer, const std::string& preset,
                 std::uint64_t seed) {
  const auto& group = crypto::GroupParams::preset(preset);
  crypto::SchemeParams params{&group, t, n};
  params.validate();
  std::vector<crypto::Dealing> dealings;
  for (std::uint32_t d = 1; d <= n; ++d) {
    ByteWriter w;
    w.raw(to_bytes("dkg-demo")).u64(seed).u32(d);
    auto out = crypto::deal(params, d, crypto::Seed::from_digest(crypto::hash(w.bytes())));
    if (bad_dealer && *bad_dealer == d) {
      // Corrupt the share sent to the first other member.
      auto& s = out.dealing.shares[d == 1 ? 1 : 0];
      s = group.add(s, group.scalar(1));
    }
    dealings.push_back(std::move(out.dealing));
  }
  auto result = crypto::complete_dkg(params, dealings);
  crypto::GroupKeys keys(group, result.verification, n);

  json out;
  out["n"] = n;
  out["t"] = t;
  out["preset"] = preset;
  out["group_public_key"] = to_hex(group.encode(keys.public_key().element));
  out["disqualified"] = result.disqualified;
  json shares = json::array();
  bool all_ok = true;
  for (const auto& sk : result.shares) {
    bool ok = group.exp_g(sk.scalar) == keys.share_key(sk.index);
    all_ok = all_ok && ok;
    shares.push_back({{"index", sk.index}, {"public_key_share", to_hex(group.encode(keys.share_key(sk.index)))},
                      {"consistent", ok}});
  }
  out["shares"] = shares;
  auto msg = to_bytes("dkg-demo message");
  std::vector<crypto::SignatureShare> sig_shares;
  for (std::size_t i = 0; i < t; ++i) sig_shares.push_back(crypto::sign_share(msg, result.shares[n - 1 - i], keys));
  auto sigma = crypto::recover(group, t, sig_shares);
  bool verified = crypto::verify_group(msg, keys, sigma);
  out["signature"] = to_hex(group.encode(sigma.value));
  out["signature_verifies"] = verified;
  std::cout << out.dump(2) << "\n";
  return all_ok && verified ? 0 : kExitSafety;
}

int cmd_matrix(const std::string& kind, std::uint64_t rounds, std::uint64_t seed, const std::string& out, bool serial) {
  auto cells = kind == "ci" ? sim::ci_matrix(rounds, seed) : sim::attack_matrix(rounds, seed);
  auto started = std::chrono::steady_clock::now();
  auto results = serial ? sim::run_matrix_serial(cells) : sim::run_matrix_parallel(cells);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.report.safety_ok();
    std::printf("%-40s safety=%s consistency_violations=%zu normal=%s\n", r.scenario.name.c_str(),
                r.report.safety_ok() ? "ok" : "VIOLATED", r.metrics.consistency_violations.size(),
                r.report.at("normal_operation").info.value("normal_rounds", json(0)).dump().c_str());
    if (!out.empty()) sim::write_run(std::filesystem::path(out) / r.scenario.name, r.metrics, r.report);
  }
  std::printf("%zu cells in %.2fs\n", results.size(), secs);
  return ok ? 0 : kExitSafety;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relay: threshold-relay consensus simulator and tools"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "simulate a scenario and write metrics");
  std::string scenario_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "master seed (overrides the file)");
  run->add_option("--out", out_dir, "output directory");

  auto* gs = app.add_subcommand("groupsize", "minimal group size for failure probability 2^-R");
  std::string beta = "3";
  unsigned rho_log2 = 40;
  std::optional<std::uint64_t> population;
  bool table = false, serial = false, as_json = false;
  gs->add_option("--beta", beta, "adversary bound beta (f < N / beta)");
  gs->add_option("--rho-log2", rho_log2, "failure probability exponent");
  gs->add_option("--population", population, "finite universe size N (hypergeometric)");
  gs->add_flag("--table", table, "print both standard tables");
  gs->add_flag("--serial", serial, "use the serial solver");
  gs->add_flag("--json", as_json, "machine-readable table");

  auto* dkg = app.add_subcommand("dkg-demo", "run a joint-Feldman DKG and a threshold signature");
  std::size_t n = 5, t = 3;
  std::optional<std::uint32_t> bad;
  std::string preset = "toy";
  std::uint64_t dkg_seed = 1;
  dkg->add_option("--n", n, "group size")->check(CLI::Range(1, 1000));
  dkg->add_option("--t", t, "threshold")->check(CLI::Range(1, 1000));
  dkg->add_option("--bad-dealer", bad, "dealer that sends one inconsistent share");
  dkg->add_option("--preset", preset, "group parameters: toy or standard");
  dkg->add_option("--seed", dkg_seed, "dealer randomness seed");

  auto* check = app.add_subcommand("check", "re-evaluate the bounds from a metrics directory");
  std::string metrics_dir;
  check->add_option("--metrics", metrics_dir, "directory written by run")->required()->check(CLI::ExistingDirectory);

  auto* matrix = app.add_subcommand("matrix", "run a scenario matrix");
  std::string kind = "attack", matrix_out;
  std::uint64_t rounds = 1000, matrix_seed = 1;
  bool matrix_serial = false;
  matrix->add_option("--kind", kind, "attack or ci")->check(CLI::IsMember({"attack", "ci"}));
  matrix->add_option("--rounds", rounds, "rounds per cell");
  matrix->add_option("--seed", matrix_seed, "master seed");
  matrix->add_option("--out", matrix_out, "write each cell's metrics below this directory");
  matrix->add_flag("--serial", matrix_serial, "run cells serially");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(scenario_path, seed, out_dir);
    if (*gs) {
      if (!table && gs->count("--rho-log2") == 0) throw std::invalid_argument("--rho-log2 is required without --table");
      return cmd_groupsize(beta, rho_log2, population, table, serial, as_json);
    }
    if (*dkg) return cmd_dkg_demo(n, t, bad, preset, dkg_seed);
    if (*check) return cmd_check(metrics_dir);
    if (*matrix) return cmd_matrix(kind, rounds, matrix_seed, matrix_out, matrix_serial);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
