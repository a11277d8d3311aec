/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <gtest/gtest.h>

#include <algorithm>

#include "relay/committee/group_size.hpp"
#include "relay/committee/sampling.hpp"

namespace relay::committee {
namespace {

// Counts n-subsets of an N-element urn holding M bad elements with at most x
// bad ones, by walking every subset.
mpq_class enumerate_hypergeometric(std::int64_t x, unsigned n, unsigned M, unsigned N) {
  std::uint64_t good = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    if (static_cast<unsigned>(__builtin_popcount(mask)) != n) continue;
    ++total;
    auto bad = __builtin_popcount(mask & ((1u << M) - 1));
    if (bad <= x) ++good;
  }
  mpq_class q(static_cast<unsigned long>(good), static_cast<unsigned long>(total));
  q.canonicalize();
  return q;
}

TEST(Hypergeometric, MatchesSubsetEnumeration) {
  for (unsigned N : {7u, 10u}) {
    for (unsigned M = 0; M <= N; ++M) {
      for (unsigned n = 0; n <= N; ++n) {
        for (std::int64_t x = -1; x <= static_cast<std::int64_t>(n); ++x) {
          ASSERT_EQ(cdf_hypergeometric(x, n, M, N), enumerate_hypergeometric(x, n, M, N))
              << "x=" << x << " n=" << n << " M=" << M << " N=" << N;
        }
      }
    }
  }
}

TEST(Hypergeometric, FullSupportIsExactlyOne) {
  EXPECT_EQ(cdf_hypergeometric(50, 50, 20, 100), 1);
  EXPECT_EQ(cdf_hypergeometric(-1, 50, 20, 100), 0);
}

TEST(Binomial, MatchesDirectSum) {
  mpq_class p(1, 3);
  // n = 4: P[X <= 1] = (2/3)^4 + 4 (1/3)(2/3)^3 = 16/81 + 32/81.
  EXPECT_EQ(cdf_binomial(1, 4, p), mpq_class(16, 27));
  EXPECT_EQ(cdf_binomial(4, 4, p), 1);
  EXPECT_EQ(cdf_binomial(0, 3, 0), 1);
  EXPECT_EQ(cdf_binomial(2, 3, 1), 0);
}

TEST(Binomial, IsLimitOfHypergeometric) {
  // For large N the hypergeometric tail approaches the binomial one.
  auto b = cdf_binomial(4, 11, mpq_class(1, 3)).get_d();
  auto h = cdf_hypergeometric(4, 11, 3000, 9000).get_d();
  EXPECT_NEAR(h, b, 2e-3);
}

TEST(Rational, Parsing) {
  EXPECT_EQ(parse_rational("3"), 3);
  EXPECT_EQ(parse_rational("5/2"), mpq_class(5, 2));
  EXPECT_EQ(parse_rational("2.25"), mpq_class(9, 4));
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_EQ(rho_from_log2(3), mpq_class(1, 8));
}

TEST(GroupSize, FullTables) {
  // rows: rho = 2^-40, 2^-64, 2^-80, 2^-128; columns: beta = 3, 4, 5.
  const std::uint64_t hyper[4][3] = {{405, 169, 111}, {651, 277, 181}, {811, 349, 227}, {1255, 555, 365}};
  const std::uint64_t binom[4][3] = {{423, 173, 111}, {701, 287, 185}, {887, 363, 235}, {1447, 593, 383}};
  auto h = solve_parallel(standard_grid(10000));
  auto b = solve_parallel(standard_grid(std::nullopt));
  ASSERT_EQ(h.size(), 12u);
  ASSERT_EQ(b.size(), 12u);
  for (int i = 0; i < 12; ++i) {
    EXPECT_EQ(h[i].n, hyper[i / 3][i % 3]) << i;
    EXPECT_EQ(b[i].n, binom[i / 3][i % 3]) << i;
  }
}

TEST(GroupSize, MinimalityAtTheBoundary) {
  // The solution satisfies the strict inequality and its predecessor does not.
  const mpq_class beta = 3, rho = rho_from_log2(40);
  auto n = min_group_size_binom(beta, rho);
  auto ok = [&](std::uint64_t k) {
    return cdf_binomial(static_cast<std::int64_t>((k + 1) / 2) - 1, k, 1 / beta) > 1 - rho;
  };
  EXPECT_TRUE(ok(n));
  EXPECT_FALSE(ok(n - 1));
  EXPECT_FALSE(ok(n - 2));
}

TEST(GroupSize, SerialMatchesParallel) {
  auto grid = standard_grid(10000);
  auto extra = standard_grid(std::nullopt);
  grid.insert(grid.end(), extra.begin(), extra.end());
  grid.push_back(GroupSizeQuery{mpq_class(7, 2), 20, 500});
  auto s = solve_serial(grid);
  auto p = solve_parallel(grid);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i].n, p[i].n) << i;
}

TEST(GroupSize, SmallPopulationBoundary) {
  // With beta > 2 the whole population is always a valid group, so a small
  // N caps the answer at N.
  const mpq_class rho = rho_from_log2(128);
  auto n = min_group_size_hyper(3, rho, 20);
  ASSERT_TRUE(n.has_value());
  EXPECT_LE(*n, 20u);
  auto ok = [&](std::uint64_t k) {
    return cdf_hypergeometric(static_cast<std::int64_t>((k + 1) / 2) - 1, k, 6, 20) > 1 - rho;
  };
  EXPECT_TRUE(ok(*n));
  for (std::uint64_t k = 1; k < *n; ++k) EXPECT_FALSE(ok(k)) << k;
  EXPECT_THROW(min_group_size_hyper(2, rho, 20), std::invalid_argument);
}

// ---- sampling ---------------------------------------------------------------------

std::vector<ReplicaId> labels(std::uint32_t n) {
  std::vector<ReplicaId> out;
  for (std::uint32_t i = 1; i <= n; ++i) out.push_back(replica_id(i));
  return out;
}

TEST(GroupDerive, Fixture) {
  auto xi = crypto::Seed::from_digest(crypto::hash(std::string_view("g")));
  auto g = group_derive(xi, 1, labels(6), 3);
  EXPECT_EQ(g, (std::vector<ReplicaId>{replica_id(4), replica_id(5), replica_id(3)}));
}

TEST(GroupDerive, BoundsAndDistinctness) {
  auto xi = crypto::Seed::from_digest(crypto::hash(std::string_view("g")));
  EXPECT_THROW(group_derive(xi, 1, labels(4), 5), std::invalid_argument);
  EXPECT_THROW(group_derive(xi, 1, labels(4), 0), std::invalid_argument);
  for (std::uint64_t j = 1; j < 40; ++j) {
    auto g = group_derive(xi, j, labels(30), 11);
    std::sort(g.begin(), g.end());
    ASSERT_EQ(std::adjacent_find(g.begin(), g.end()), g.end());
  }
}

TEST(CommitteeSelect, Fixture) {
  auto xi = crypto::Seed::from_digest(crypto::hash(std::string_view("sel")));
  EXPECT_EQ(committee_select(xi, 4), 0u);
  EXPECT_EQ(committee_select(xi, 1), 0u);
  EXPECT_THROW(committee_select(xi, 0), std::invalid_argument);
}

TEST(FormGroup, KeysMatchShares) {
  const auto& params = crypto::GroupParams::toy();
  auto xi = crypto::Seed::from_digest(crypto::hash(std::string_view("form")));
  auto fg = form_group(params, xi, 2, labels(9), 5, crypto::prg(xi, 99));
  EXPECT_EQ(fg.group.members, group_derive(xi, 2, labels(9), 5));
  EXPECT_EQ(fg.group.threshold(), 3u);
  for (std::uint32_t i = 1; i <= 5; ++i) {
    EXPECT_EQ(fg.group.position_of(fg.group.members[i - 1]), i);
    EXPECT_EQ(params.exp_g(fg.secret_shares[i - 1].scalar), fg.group.keys->share_key(i));
  }
}

}  // namespace
}  // namespace relay::committee
