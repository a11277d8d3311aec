/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

// Minimal committee sizes such that a randomly sampled group has an honest
// majority except with probability rho. Everything is exact: the CDFs return
// rationals and the solvers compare integer tails.

namespace relay::committee {

/// sum_{k <= x} C(M,k) C(N-M,n-k) / C(N,n). Requires 0 <= M <= N, 0 <= n <= N.
mpq_class cdf_hypergeometric(std::int64_t x, std::uint64_t n, std::uint64_t M, std::uint64_t N);

/// sum_{k <= x} C(n,k) p^k (1-p)^(n-k). Requires 0 <= p <= 1.
mpq_class cdf_binomial(std::int64_t x, std::uint64_t n, const mpq_class& p);

/// Parses "3", "5/2" or "2.5" into an exact rational.
mpq_class parse_rational(std::string_view text);
/// 2^-bits.
mpq_class rho_from_log2(unsigned bits);

/// Smallest n with CDFhg(ceil(n/2) - 1, n, floor(N/beta), N) > 1 - rho, or
/// nullopt if no n <= N qualifies.
std::optional<std::uint64_t> min_group_size_hyper(const mpq_class& beta, const mpq_class& rho, std::uint64_t N);

/// Smallest n with CDFbinom(ceil(n/2) - 1, n, 1/beta) > 1 - rho.
std::uint64_t min_group_size_binom(const mpq_class& beta, const mpq_class& rho);

// ---- table kernels ------------------------------------------------------------

struct GroupSizeQuery {
  mpq_class beta;
  unsigned rho_log2 = 0;
  std::optional<std::uint64_t> population;  // nullopt: unbounded universe
};

struct GroupSizeAnswer {
  GroupSizeQuery query;
  std::optional<std::uint64_t> n;
};

/// Reference implementation: solves queries in order.
std::vector<GroupSizeAnswer> solve_serial(std::span<const GroupSizeQuery> queries);
/// One OpenMP task per query; same output as solve_serial.
std::vector<GroupSizeAnswer> solve_parallel(std::span<const GroupSizeQuery> queries);

/// The 12-cell grid beta in {3,4,5} x rho in {2^-40, 2^-64, 2^-80, 2^-128},
/// row-major by rho.
std::vector<GroupSizeQuery> standard_grid(std::optional<std::uint64_t> population);

}  // namespace relay::committee
