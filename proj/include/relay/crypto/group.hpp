/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string_view>

#include "relay/crypto/primitives.hpp"
#include "relay/types.hpp"

namespace relay::crypto {

/// Element of the order-q subgroup of Z_p^*.
struct Element {
  mpz_class value;
  bool operator==(const Element& o) const { return value == o.value; }
};

/// Element of Z_q.
struct Scalar {
  mpz_class value;
  bool operator==(const Scalar& o) const { return value == o.value; }
};

/// Schnorr group: p prime, q prime with q | p - 1, g of order q.
class GroupParams {
 public:
  GroupParams(mpz_class p, mpz_class q, mpz_class g);

  /// p = 2q + 1 just below 2^61. Fast enough for exhaustive subset tests and
  /// long simulations.
  static const GroupParams& toy();
  /// 2048-bit p with a 256-bit prime-order subgroup, generated from
  /// nothing-up-my-sleeve strings (procedure in README.md).
  static const GroupParams& standard();
  static const GroupParams& preset(std::string_view name);

  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  Element generator() const { return Element{g_}; }
  std::size_t element_bytes() const { return element_bytes_; }
  std::size_t scalar_bytes() const { return scalar_bytes_; }

  /// Checks primality of p and q, q | p - 1 and g^q = 1, g != 1.
  bool validate() const;
  bool is_member(const Element& e) const;

  Element mul(const Element& a, const Element& b) const;
  Element pow(const Element& base, const Scalar& exponent) const;
  Element pow(const Element& base, const mpz_class& exponent) const;
  Element exp_g(const Scalar& exponent) const;
  Element identity() const { return Element{1}; }

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar inverse(const Scalar& a) const;
  Scalar scalar(std::uint64_t v) const;

  /// Uniform-ish element of Z_q from a wide (scalar_bytes + 16) hash expansion.
  Scalar hash_to_scalar(std::string_view domain, ByteView data) const;
  /// Hash into the subgroup: x^((p-1)/q) for x drawn from a wide hash of the
  /// message, incrementing a counter until the result is not the identity.
  Element hash_to_group(ByteView message) const;

  Bytes encode(const Element& e) const;
  Bytes encode(const Scalar& s) const;
  Element decode_element(ByteView data) const;
  Scalar decode_scalar(ByteView data) const;

 private:
  mpz_class p_, q_, g_, cofactor_;
  std::size_t element_bytes_ = 0;
  std::size_t scalar_bytes_ = 0;
};

/// Fixed-width big-endian export of a non-negative integer.
Bytes export_fixed(const mpz_class& v, std::size_t width);
mpz_class import_bytes(ByteView data);
/// Counter-mode SHA-256 expansion to `length` octets.
Bytes expand(std::string_view domain, ByteView data, std::size_t length);

}  // namespace relay::crypto
