/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/committee/group_size.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace relay::committee {

namespace {

mpz_class binomial(std::uint64_t n, std::uint64_t k) {
  mpz_class r;
  if (k > n) return r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class power(const mpz_class& base, std::uint64_t e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

mpz_class mpz_of(std::uint64_t v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

void divexact(mpz_class& num, const mpz_class& den) {
  mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
}

void check_query(const mpq_class& beta, const mpq_class& rho) {
  if (beta <= 2) throw std::invalid_argument("beta must exceed 2");
  if (rho <= 0 || rho >= 1) throw std::invalid_argument("rho must lie in (0, 1)");
}

// Largest tolerated number of bad members: ceil(n/2) - 1.
std::uint64_t majority_slack(std::uint64_t n) { return (n + 1) / 2 - 1; }

}  // namespace

mpq_class cdf_hypergeometric(std::int64_t x, std::uint64_t n, std::uint64_t M, std::uint64_t N) {
  if (M > N || n > N) throw std::invalid_argument("hypergeometric parameters out of domain");
  if (x < 0) return 0;
  auto good = N - M;
  std::uint64_t k_min = n > good ? n - good : 0;
  std::uint64_t k_max = std::min<std::uint64_t>({static_cast<std::uint64_t>(x), n, M});
  mpz_class sum;
  for (auto k = k_min; k <= k_max; ++k) sum += binomial(M, k) * binomial(good, n - k);
  mpq_class r(sum, binomial(N, n));
  r.canonicalize();
  return r;
}

mpq_class cdf_binomial(std::int64_t x, std::uint64_t n, const mpq_class& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
  if (x < 0 || static_cast<std::uint64_t>(x) > n) throw std::invalid_argument("x must lie in [0, n]");
  const mpz_class& a = p.get_num();
  const mpz_class& b = p.get_den();
  mpz_class c = b - a;
  mpz_class sum;
  for (std::uint64_t k = 0; k <= static_cast<std::uint64_t>(x); ++k) {
    sum += binomial(n, k) * power(a, k) * power(c, n - k);
  }
  mpq_class r(sum, power(b, n));
  r.canonicalize();
  return r;
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("not a rational number: " + s); };
  if (s.empty()) throw bad();
  auto digits = [](std::string_view v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char ch) { return std::isdigit(ch); });
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    auto num = std::string_view(s).substr(0, slash);
    auto den = std::string_view(s).substr(slash + 1);
    if (!digits(num) || !digits(den)) throw bad();
    mpz_class d{std::string(den)};
    if (d == 0) throw bad();
    mpq_class r{mpz_class{std::string(num)}, d};
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    auto whole = std::string_view(s).substr(0, dot);
    auto frac = std::string_view(s).substr(dot + 1);
    if (!digits(whole) || !digits(frac)) throw bad();
    mpq_class r{mpz_class{std::string(whole) + std::string(frac)}, power(10, frac.size())};
    r.canonicalize();
    return r;
  }
  if (!digits(s)) throw bad();
  return mpq_class(mpz_class(s));
}

mpq_class rho_from_log2(unsigned bits) {
  mpq_class r(1, 1);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
  return r;
}

std::optional<std::uint64_t> min_group_size_hyper(const mpq_class& beta, const mpq_class& rho, std::uint64_t N) {
  check_query(beta, rho);
  if (N == 0) throw std::invalid_argument("population must be positive");
  mpz_class bad_count = mpz_of(N) * beta.get_den() / beta.get_num();  // floor(N / beta)
  const std::uint64_t M = bad_count.get_ui();
  const std::uint64_t good = N - M;

  mpz_class total = 1;  // C(N, n), updated incrementally
  for (std::uint64_t n = 1; n <= N; ++n) {
    total *= mpz_of(N - n + 1);
    divexact(total, mpz_of(n));

    // Failure mass: sum over k > slack of C(M,k) C(N-M,n-k).
    std::uint64_t k = std::max<std::uint64_t>(majority_slack(n) + 1, n > good ? n - good : 0);
    std::uint64_t k_end = std::min(n, M);
    mpz_class tail;
    if (k <= k_end) {
      mpz_class term = binomial(M, k) * binomial(good, n - k);
      for (;;) {
        tail += term;
        if (k == k_end) break;
        term *= mpz_of(M - k) * mpz_of(n - k);
        divexact(term, mpz_of(k + 1) * mpz_of(good - n + k + 1));
        ++k;
      }
    }
    if (tail * rho.get_den() < rho.get_num() * total) return n;
  }
  return std::nullopt;
}

std::uint64_t min_group_size_binom(const mpq_class& beta, const mpq_class& rho) {
  check_query(beta, rho);
  // p = 1/beta = a/b, failure mass scaled by b^n.
  const mpz_class a = beta.get_den();
  const mpz_class b = beta.get_num();
  const mpz_class c = b - a;
  constexpr std::uint64_t kSearchLimit = 1u << 16;

  mpz_class scale = 1;  // b^n
  for (std::uint64_t n = 1; n <= kSearchLimit; ++n) {
    scale *= b;
    std::uint64_t k = majority_slack(n) + 1;
    mpz_class term = binomial(n, k) * power(a, k) * power(c, n - k);
    mpz_class tail;
    for (;;) {
      tail += term;
      if (k == n) break;
      term *= mpz_of(n - k) * a;
      divexact(term, mpz_of(k + 1) * c);
      ++k;
    }
    if (tail * rho.get_den() < rho.get_num() * scale) return n;
  }
  throw std::runtime_error("group size search limit exceeded");
}

namespace {

GroupSizeAnswer solve_one(const GroupSizeQuery& q) {
  GroupSizeAnswer a{q, std::nullopt};
  auto rho = rho_from_log2(q.rho_log2);
  if (q.population) {
    a.n = min_group_size_hyper(q.beta, rho, *q.population);
  } else {
    a.n = min_group_size_binom(q.beta, rho);
  }
  return a;
}

}  // namespace

std::vector<GroupSizeAnswer> solve_serial(std::span<const GroupSizeQuery> queries) {
  std::vector<GroupSizeAnswer> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(solve_one(q));
  return out;
}

std::vector<GroupSizeAnswer> solve_parallel(std::span<const GroupSizeQuery> queries) {
  std::vector<GroupSizeAnswer> out(queries.size());
  const auto count = static_cast<std::int64_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = solve_one(queries[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<GroupSizeQuery> standard_grid(std::optional<std::uint64_t> population) {
  std::vector<GroupSizeQuery> grid;
  for (unsigned rho : {40u, 64u, 80u, 128u}) {
    for (int beta : {3, 4, 5}) grid.push_back(GroupSizeQuery{mpq_class(beta), rho, population});
  }
  return grid;
}

}  // namespace relay::committee
