/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

// Serial reference vs OpenMP version of each parallel kernel.

#include <benchmark/benchmark.h>

#include "relay/committee/group_size.hpp"
#include "relay/crypto/threshold.hpp"
#include "relay/sim/matrix.hpp"

namespace {

using namespace relay;

std::vector<committee::GroupSizeQuery> table_grid() {
  auto grid = committee::standard_grid(10000);
  auto binom = committee::standard_grid(std::nullopt);
  grid.insert(grid.end(), binom.begin(), binom.end());
  return grid;
}

void BM_GroupSizeSerial(benchmark::State& state) {
  auto grid = table_grid();
  for (auto _ : state) benchmark::DoNotOptimize(committee::solve_serial(grid));
}

void BM_GroupSizeParallel(benchmark::State& state) {
  auto grid = table_grid();
  for (auto _ : state) benchmark::DoNotOptimize(committee::solve_parallel(grid));
}

struct ShareBatch {
  std::shared_ptr<crypto::GroupKeys> keys;
  std::vector<crypto::ShareCheck> checks;
};

ShareBatch share_batch(const std::string& preset, std::size_t count) {
  const auto& g = crypto::GroupParams::preset(preset);
  const std::size_t n = 7;
  auto scheme = crypto::SchemeParams::majority(g, n);
  std::vector<crypto::Seed> randomness;
  for (std::size_t i = 1; i <= n; ++i) randomness.push_back(crypto::prg(crypto::Seed{}, i));
  auto dkg = crypto::dkg(scheme, randomness);
  ShareBatch out{std::make_shared<crypto::GroupKeys>(g, dkg.verification, n), {}};
  for (std::size_t k = 0; k < count; ++k) {
    crypto::ShareCheck c;
    c.message = to_bytes("bench-" + std::to_string(k));
    c.index = static_cast<std::uint32_t>(k % n + 1);
    c.share = crypto::sign_share(c.message, dkg.shares[c.index - 1], *out.keys);
    out.checks.push_back(std::move(c));
  }
  return out;
}

void BM_VerifySharesSerial(benchmark::State& state) {
  auto batch = share_batch(state.range(0) ? "standard" : "toy", 64);
  for (auto _ : state) benchmark::DoNotOptimize(crypto::verify_shares_serial(*batch.keys, batch.checks));
  state.SetItemsProcessed(state.iterations() * batch.checks.size());
}

void BM_VerifySharesParallel(benchmark::State& state) {
  auto batch = share_batch(state.range(0) ? "standard" : "toy", 64);
  for (auto _ : state) benchmark::DoNotOptimize(crypto::verify_shares_parallel(*batch.keys, batch.checks));
  state.SetItemsProcessed(state.iterations() * batch.checks.size());
}

void BM_MatrixSerial(benchmark::State& state) {
  auto cells = sim::attack_matrix(50, 1, {0});
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_matrix_serial(cells));
}

void BM_MatrixParallel(benchmark::State& state) {
  auto cells = sim::attack_matrix(50, 1, {0});
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_matrix_parallel(cells));
}

}  // namespace

BENCHMARK(BM_GroupSizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GroupSizeParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifySharesSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifySharesParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MatrixSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
