/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/chain/weight.hpp"

#include <cmath>

namespace relay::chain {

DyadicWeight::DyadicWeight(mpz_class num, std::uint64_t exp) : num_(std::move(num)), exp_(exp) { normalize(); }

void DyadicWeight::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  auto twos = mpz_scan1(num_.get_mpz_t(), 0);
  auto shift = std::min<std::uint64_t>(twos, exp_);
  if (shift > 0) {
    mpz_fdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), shift);
    exp_ -= shift;
  }
}

DyadicWeight DyadicWeight::of_rank(std::size_t rank) { return DyadicWeight(1, rank); }

DyadicWeight DyadicWeight::operator+(const DyadicWeight& o) const {
  auto e = std::max(exp_, o.exp_);
  mpz_class a, b;
  mpz_mul_2exp(a.get_mpz_t(), num_.get_mpz_t(), e - exp_);
  mpz_mul_2exp(b.get_mpz_t(), o.num_.get_mpz_t(), e - o.exp_);
  return DyadicWeight(a + b, e);
}

std::strong_ordering DyadicWeight::operator<=>(const DyadicWeight& o) const {
  auto e = std::max(exp_, o.exp_);
  mpz_class a, b;
  mpz_mul_2exp(a.get_mpz_t(), num_.get_mpz_t(), e - exp_);
  mpz_mul_2exp(b.get_mpz_t(), o.num_.get_mpz_t(), e - o.exp_);
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

double DyadicWeight::to_double() const { return std::ldexp(num_.get_d(), -static_cast<int>(exp_)); }

std::string DyadicWeight::to_string() const {
  if (exp_ == 0) return num_.get_str();
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, exp_);
  return num_.get_str() + "/" + den.get_str();
}

}  // namespace relay::chain
