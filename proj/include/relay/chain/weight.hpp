/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

namespace relay::chain {

/// Exact non-negative dyadic rational num / 2^exponent, kept normalized so
/// that equal values have equal representations.
class DyadicWeight {
 public:
  DyadicWeight() = default;
  /// w(rank) = 2^-rank.
  static DyadicWeight of_rank(std::size_t rank);

  DyadicWeight operator+(const DyadicWeight& o) const;
  DyadicWeight& operator+=(const DyadicWeight& o) { return *this = *this + o; }
  std::strong_ordering operator<=>(const DyadicWeight& o) const;
  bool operator==(const DyadicWeight& o) const { return (*this <=> o) == 0; }

  const mpz_class& numerator() const { return num_; }
  std::uint64_t exponent() const { return exp_; }
  double to_double() const;
  /// "0", "1", "13/4".
  std::string to_string() const;

 private:
  DyadicWeight(mpz_class num, std::uint64_t exp);
  void normalize();

  mpz_class num_ = 0;
  std::uint64_t exp_ = 0;
};

}  // namespace relay::chain
