/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <vector>

#include "relay/sim/metrics.hpp"
#include "relay/sim/theorems.hpp"

namespace relay::sim {

struct CellResult {
  Scenario scenario;
  Metrics metrics;
  Report report;
};

/// Runs independent scenarios one after another.
std::vector<CellResult> run_matrix_serial(const std::vector<Scenario>& cells);
/// Same results as run_matrix_serial, one OpenMP task per cell.
std::vector<CellResult> run_matrix_parallel(const std::vector<Scenario>& cells);

/// Attack matrix: n in {4, 7, 10} single-group universes with
/// f = floor((n-1)/2) equivocators, signature withholders, or notarization
/// withholders releasing after delta_mult * delta for each entry of
/// `release_multiples`.
std::vector<Scenario> attack_matrix(std::uint64_t rounds, std::uint64_t seed,
                                    const std::vector<std::int64_t>& release_multiples = {0, 1, 5});

/// Broad CI matrix: n in {4, 7, 10}, f in {0, 1, floor((n-1)/2)}, every
/// behavior, BlockTime in {3 delta, 5 delta}.
std::vector<Scenario> ci_matrix(std::uint64_t rounds, std::uint64_t seed);

}  // namespace relay::sim
