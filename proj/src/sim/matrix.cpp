/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/sim/matrix.hpp"

#include <omp.h>

#include <exception>

#include "relay/sim/simulation.hpp"

namespace relay::sim {

namespace {

CellResult run_cell(const Scenario& s) {
  CellResult out{s, run_scenario(s), {}};
  out.report = assert_theorems(out.metrics, s);
  return out;
}

// f = floor((n-1)/2) only satisfies |f| < |U| / beta for beta slightly above
// 2, so the attack cells configure beta = 9/4.
Scenario attack_cell(std::uint32_t n, std::uint64_t rounds, std::uint64_t seed) {
  Scenario s;
  s.universe = n;
  s.rounds = rounds;
  s.seed = seed;
  s.beta = mpq_class(9, 4);
  return s;
}

std::vector<ReplicaId> first_ids(std::uint32_t count) {
  std::vector<ReplicaId> ids;
  for (std::uint32_t i = 1; i <= count; ++i) ids.push_back(replica_id(i));
  return ids;
}

}  // namespace

std::vector<CellResult> run_matrix_serial(const std::vector<Scenario>& cells) {
  std::vector<CellResult> out;
  out.reserve(cells.size());
  for (const auto& s : cells) out.push_back(run_cell(s));
  return out;
}

std::vector<CellResult> run_matrix_parallel(const std::vector<Scenario>& cells) {
  std::vector<std::optional<CellResult>> slots(cells.size());
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      slots[i] = run_cell(cells[i]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  std::vector<CellResult> out;
  out.reserve(cells.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<Scenario> attack_matrix(std::uint64_t rounds, std::uint64_t seed,
                                    const std::vector<std::int64_t>& release_multiples) {
  std::vector<Scenario> cells;
  for (std::uint32_t n : {4u, 7u, 10u}) {
    const auto f = (n - 1) / 2;
    auto add = [&](Behavior b, SimTime release, const std::string& label) {
      auto s = attack_cell(n, rounds, seed);
      s.name = "n" + std::to_string(n) + "-" + label;
      s.adversaries.push_back({b, first_ids(f), release, {}});
      cells.push_back(std::move(s));
    };
    add(Behavior::kEquivocate, {}, "equivocate");
    add(Behavior::kWithholdSignatures, {}, "withhold-signatures");
    for (auto k : release_multiples) {
      add(Behavior::kWithholdNotarization, SimTime::units(k), "withhold-notarization-" + std::to_string(k));
    }
  }
  return cells;
}

std::vector<Scenario> ci_matrix(std::uint64_t rounds, std::uint64_t seed) {
  std::vector<Scenario> cells;
  const Behavior behaviors[] = {Behavior::kEquivocate,     Behavior::kWithholdSignatures,
                                Behavior::kWithholdNotarization, Behavior::kSelfishChain,
                                Behavior::kCrash,          Behavior::kBeaconAbstain};
  for (std::uint32_t n : {4u, 7u, 10u}) {
    std::vector<std::uint32_t> fs{0, 1, (n - 1) / 2};
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    for (std::int64_t bt : {3, 5}) {
      for (auto f : fs) {
        for (auto b : behaviors) {
          if (f == 0 && b != Behavior::kEquivocate) continue;  // one all-honest cell per (n, BlockTime)
          auto s = attack_cell(n, rounds, seed);
          s.block_time = SimTime::units(bt);
          s.name = "n" + std::to_string(n) + "-bt" + std::to_string(bt) + "-f" + std::to_string(f);
          if (f > 0) {
            s.name += "-" + behavior_name(b);
            AdversarySpec a{b, first_ids(f), SimTime::units(1), SimTime::units(10)};
            s.adversaries.push_back(a);
          }
          cells.push_back(std::move(s));
        }
      }
    }
  }
  return cells;
}

}  // namespace relay::sim
