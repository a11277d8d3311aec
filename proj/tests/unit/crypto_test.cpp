/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "relay/codec.hpp"
#include "relay/crypto/group.hpp"
#include "relay/crypto/primitives.hpp"
#include "relay/crypto/threshold.hpp"

namespace relay::crypto {
namespace {

std::vector<ReplicaId> labels(std::uint32_t n) {
  std::vector<ReplicaId> out;
  for (std::uint32_t i = 1; i <= n; ++i) out.push_back(replica_id(i));
  return out;
}

std::vector<std::uint32_t> raw(const std::vector<ReplicaId>& ids) {
  std::vector<std::uint32_t> out;
  for (auto id : ids) out.push_back(to_underlying(id));
  return out;
}

// Vectors below were produced by an independent SHA-256 implementation
// (Python hashlib) of the same definitions and frozen here.

TEST(Hash, Fixture) {
  EXPECT_EQ(hash(std::string_view("DFINITY")).hex(),
            "29a2ce1f68fb64de053543ef7c3b38837b941a7dd4ea5967b54e6eab4ab12238");
}

TEST(Prg, Fixture) {
  auto seed = Seed::from_digest(hash(std::string_view("seed")));
  EXPECT_EQ(prg(seed, 3).hex(), "70690c392a9bad26e9b856b9e8b5fcc274d8ebf1c6693494cf092a84c8a5c2b2");
}

TEST(Prg, DistinctIndicesDiffer) {
  auto seed = Seed::from_digest(hash(std::string_view("seed")));
  EXPECT_NE(prg(seed, 0), prg(seed, 1));
  EXPECT_EQ(prg(seed, 7), prg(seed, 7));
}

TEST(Permutation, Fixture) {
  auto p = permutation(labels(5), Seed::from_digest(hash(std::string_view("x"))));
  EXPECT_EQ(raw(p.order()), (std::vector<std::uint32_t>{4, 1, 3, 2, 5}));
  EXPECT_EQ(p.at(1), replica_id(4));
  EXPECT_EQ(p.rank_of(replica_id(4)), 0u);
  EXPECT_EQ(p.rank_of(replica_id(5)), 4u);
  EXPECT_THROW(p.rank_of(replica_id(9)), std::out_of_range);
}

TEST(Permutation, RejectsBadUniverse) {
  auto seed = Seed::from_digest(hash(std::string_view("x")));
  EXPECT_THROW(permutation({}, seed), std::invalid_argument);
  std::vector<ReplicaId> dup{replica_id(1), replica_id(2), replica_id(1)};
  EXPECT_THROW(permutation(dup, seed), std::invalid_argument);
}

TEST(Permutation, IsBijectionForManySeeds) {
  auto u = labels(23);
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto p = permutation(u, prg(Seed{}, i));
    auto sorted = p.order();
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, u);
  }
}

TEST(Reduce, MatchesWideIntegerOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    Bytes v(16);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng());
    std::uint64_t m = rng() % 1000003 + 1;
    unsigned __int128 x = 0;
    for (auto b : v) x = (x << 8) | b;
    ASSERT_EQ(reduce(v, m), static_cast<std::uint64_t>(x % m));
  }
  EXPECT_THROW(reduce(Bytes{1}, 0), std::invalid_argument);
}

TEST(GroupParams, PresetsValidate) {
  EXPECT_TRUE(GroupParams::toy().validate());
  EXPECT_TRUE(GroupParams::standard().validate());
}

TEST(GroupParams, ToyArithmeticMatchesInt128) {
  const auto& g = GroupParams::toy();
  const auto p = g.p().get_ui(), q = g.q().get_ui();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint64_t a = rng() % q, b = rng() % q;
    Scalar sa = g.scalar(a), sb = g.scalar(b);
    ASSERT_EQ(g.mul(sa, sb).value.get_ui(), static_cast<std::uint64_t>((unsigned __int128)a * b % q));
    ASSERT_EQ(g.add(sa, sb).value.get_ui(), (a + b) % q);
    if (a != 0) {
      ASSERT_EQ(g.mul(sa, g.inverse(sa)).value.get_ui(), 1u);
    }
    // Square-and-multiply over Z_p as the oracle for exp_g.
    unsigned __int128 acc = 1, base = g.generator().value.get_ui();
    for (std::uint64_t e = a; e; e >>= 1) {
      if (e & 1) acc = acc * base % p;
      base = base * base % p;
    }
    ASSERT_EQ(g.exp_g(sa).value.get_ui(), static_cast<std::uint64_t>(acc));
  }
}

TEST(GroupParams, HashToGroupIsMember) {
  const auto& g = GroupParams::toy();
  for (int i = 0; i < 50; ++i) {
    auto e = g.hash_to_group(to_bytes("m" + std::to_string(i)));
    ASSERT_TRUE(g.is_member(e));
    ASSERT_NE(e, g.identity());
  }
  EXPECT_EQ(g.hash_to_group(to_bytes("a")), g.hash_to_group(to_bytes("a")));
}

TEST(GroupParams, EncodingRoundTrip) {
  for (const auto* g : {&GroupParams::toy(), &GroupParams::standard()}) {
    auto e = g->hash_to_group(to_bytes("enc"));
    auto bytes = g->encode(e);
    EXPECT_EQ(bytes.size(), g->element_bytes());
    EXPECT_EQ(g->decode_element(bytes), e);
  }
}

// ---- threshold signatures ---------------------------------------------------

struct Fixture {
  SchemeParams scheme;
  DkgResult result;
  std::shared_ptr<GroupKeys> keys;
};

Fixture make_group(std::size_t n, const std::string& label = "group", const GroupParams& g = GroupParams::toy()) {
  Fixture f;
  f.scheme = SchemeParams::majority(g, n);
  std::vector<Seed> randomness;
  for (std::size_t i = 1; i <= n; ++i) randomness.push_back(prg(Seed::from_digest(hash(label)), i));
  f.result = dkg(f.scheme, randomness);
  f.keys = std::make_shared<GroupKeys>(g, f.result.verification, n);
  return f;
}

TEST(Threshold, MajorityThreshold) {
  for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(SchemeParams::majority(GroupParams::toy(), n).threshold, n / 2 + 1);
}

TEST(Threshold, LagrangeCoefficientsSumToOne) {
  // sum_i lambda_i * f(i) for f = 1 gives f(0) = 1.
  const auto& g = GroupParams::toy();
  std::vector<std::uint32_t> idx{2, 3, 7, 11};
  auto lambda = lagrange_at_zero(g, idx);
  Scalar sum = g.scalar(0);
  for (const auto& l : lambda) sum = g.add(sum, l);
  EXPECT_EQ(sum.value, 1);
}

TEST(Threshold, EverySubsetRecoversTheSameSignature) {
  auto f = make_group(5);
  const auto t = f.scheme.threshold;
  ASSERT_EQ(t, 3u);
  auto message = to_bytes("uniqueness");
  std::vector<SignatureShare> shares;
  for (const auto& sk : f.result.shares) shares.push_back(sign_share(message, sk, *f.keys));
  std::optional<Element> first;
  int subsets = 0;
  for (int mask = 0; mask < 32; ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    std::vector<SignatureShare> pick;
    for (int i = 0; i < 5; ++i) {
      if (mask & (1 << i)) pick.push_back(shares[i]);
    }
    auto sigma = recover(f.keys->params(), t, pick);
    EXPECT_TRUE(verify_group(message, *f.keys, sigma));
    if (!first) first = sigma.value;
    EXPECT_EQ(sigma.value, *first);
    ++subsets;
  }
  EXPECT_EQ(subsets, 10);
}

TEST(Threshold, GroupSignatureIsSecretPowerOfHash) {
  // Oracle: the group secret is the sum of the dealers' constant terms.
  const auto& g = GroupParams::toy();
  auto scheme = SchemeParams::majority(g, 5);
  Scalar secret = g.scalar(0);
  std::vector<Dealing> dealings;
  for (std::uint32_t d = 1; d <= 5; ++d) {
    auto out = deal(scheme, d, prg(Seed{}, d));
    secret = g.add(secret, out.polynomial.coefficients.at(0));
    dealings.push_back(out.dealing);
  }
  auto result = complete_dkg(scheme, dealings);
  GroupKeys keys(g, result.verification, 5);
  EXPECT_EQ(g.exp_g(secret), keys.public_key().element);
  auto m = to_bytes("oracle");
  std::vector<SignatureShare> shares;
  for (const auto& sk : result.shares) shares.push_back(sign_share(m, sk, keys));
  auto sigma = recover(g, scheme.threshold, shares);
  EXPECT_EQ(sigma.value, g.pow(g.hash_to_group(m), secret));
}

TEST(Threshold, TamperedShareIsRejected) {
  auto f = make_group(4);
  auto m = to_bytes("tamper");
  auto s = sign_share(m, f.result.shares[0], *f.keys);
  EXPECT_TRUE(verify_share(m, *f.keys, 1, s));
  EXPECT_FALSE(verify_share(to_bytes("other"), *f.keys, 1, s));
  EXPECT_FALSE(verify_share(m, *f.keys, 2, s));
  auto bad = s;
  bad.value = f.keys->params().mul(bad.value, f.keys->params().generator());
  EXPECT_FALSE(verify_share(m, *f.keys, 1, bad));
  bad = s;
  bad.proof.response = f.keys->params().add(bad.proof.response, f.keys->params().scalar(1));
  EXPECT_FALSE(verify_share(m, *f.keys, 1, bad));
}

TEST(Threshold, SigningIsDeterministic) {
  auto f = make_group(3);
  auto m = to_bytes("det");
  auto a = sign_share(m, f.result.shares[1], *f.keys);
  auto b = sign_share(m, f.result.shares[1], *f.keys);
  EXPECT_EQ(encode(f.keys->params(), a), encode(f.keys->params(), b));
}

TEST(Threshold, RecoverNeedsThresholdDistinctShares) {
  auto f = make_group(5);
  auto m = to_bytes("few");
  auto s1 = sign_share(m, f.result.shares[0], *f.keys);
  auto s2 = sign_share(m, f.result.shares[1], *f.keys);
  std::vector<SignatureShare> two{s1, s2};
  EXPECT_THROW(recover(f.keys->params(), 3, two), std::invalid_argument);
  std::vector<SignatureShare> repeated{s1, s1, s2};
  EXPECT_THROW(recover(f.keys->params(), 3, repeated), std::invalid_argument);
}

TEST(Threshold, ForgedGroupSignatureFailsVerification) {
  auto f = make_group(5);
  auto m = to_bytes("forge");
  std::vector<SignatureShare> shares;
  for (int i = 0; i < 3; ++i) shares.push_back(sign_share(m, f.result.shares[i], *f.keys));
  auto sigma = recover(f.keys->params(), 3, shares);
  auto forged = sigma;
  forged.value = f.keys->params().generator();
  EXPECT_FALSE(verify_group(m, *f.keys, forged));
  auto short_sigma = sigma;
  short_sigma.contributors.pop_back();
  EXPECT_FALSE(verify_group(m, *f.keys, short_sigma));
}

TEST(Threshold, GroupSignatureEncodingRoundTrip) {
  auto f = make_group(3);
  auto m = to_bytes("codec");
  std::vector<SignatureShare> shares;
  for (const auto& sk : f.result.shares) shares.push_back(sign_share(m, sk, *f.keys));
  auto sigma = recover(f.keys->params(), 2, shares);
  auto back = decode_group_signature(f.keys->params(), encode(f.keys->params(), sigma));
  EXPECT_EQ(back.value, sigma.value);
  EXPECT_TRUE(verify_group(m, *f.keys, back));
}

TEST(Threshold, DeriveRandomnessFixture) {
  // derive_randomness is hash(encode(sigma.value)); checked against hashing
  // the fixed-width encoding directly.
  const auto& g = GroupParams::toy();
  GroupSignature sigma;
  sigma.value = g.exp_g(g.scalar(12345));
  auto expected = hash(g.encode(sigma.value));
  EXPECT_EQ(derive_randomness(g, sigma), Seed::from_digest(expected));
}

// ---- DKG ------------------------------------------------------------------------

TEST(Dkg, SharesInterpolateToGroupSecretForSeveralSizes) {
  const auto& g = GroupParams::toy();
  for (std::size_t n : {3u, 5u, 7u}) {
    auto scheme = SchemeParams::majority(g, n);
    std::vector<Dealing> dealings;
    std::vector<DealerPolynomial> polys;
    for (std::uint32_t d = 1; d <= n; ++d) {
      auto out = deal(scheme, d, prg(Seed::from_digest(hash(std::string_view("dkg"))), d));
      dealings.push_back(out.dealing);
      polys.push_back(out.polynomial);
    }
    auto result = complete_dkg(scheme, dealings);
    EXPECT_TRUE(result.disqualified.empty());
    // Oracle: f(x) = sum of dealer polynomials, evaluated directly.
    auto f = [&](std::uint64_t x) {
      Scalar acc = g.scalar(0);
      for (const auto& p : polys) {
        Scalar pow = g.scalar(1);
        for (const auto& c : p.coefficients) {
          acc = g.add(acc, g.mul(c, pow));
          pow = g.mul(pow, g.scalar(x));
        }
      }
      return acc;
    };
    for (std::uint32_t i = 1; i <= n; ++i) EXPECT_EQ(result.shares[i - 1].scalar, f(i)) << "n=" << n;
    EXPECT_EQ(g.exp_g(f(0)), result.verification.public_key());
    GroupKeys keys(g, result.verification, n);
    for (std::uint32_t i = 1; i <= n; ++i) EXPECT_EQ(keys.share_key(i), g.exp_g(f(i)));
  }
}

TEST(Dkg, BadDealerIsDisqualified) {
  const auto& g = GroupParams::toy();
  for (std::size_t n : {3u, 5u, 7u}) {
    auto scheme = SchemeParams::majority(g, n);
    std::vector<Dealing> dealings;
    for (std::uint32_t d = 1; d <= n; ++d) dealings.push_back(deal(scheme, d, prg(Seed{}, d)).dealing);
    dealings[1].shares[0] = g.add(dealings[1].shares[0], g.scalar(1));
    EXPECT_FALSE(verify_dealt_share(g, dealings[1].commitments, 1, dealings[1].shares[0]));
    auto result = complete_dkg(scheme, dealings);
    EXPECT_EQ(result.disqualified, (std::set<std::uint32_t>{2}));
    GroupKeys keys(g, result.verification, n);
    auto m = to_bytes("after disqualification");
    std::vector<SignatureShare> shares;
    for (const auto& sk : result.shares) shares.push_back(sign_share(m, sk, keys));
    EXPECT_TRUE(verify_group(m, keys, recover(g, scheme.threshold, shares)));
  }
}

TEST(Dkg, FailsWithTooFewQualifiedDealers) {
  const auto& g = GroupParams::toy();
  auto scheme = SchemeParams::majority(g, 3);
  std::vector<Dealing> dealings;
  for (std::uint32_t d = 1; d <= 3; ++d) dealings.push_back(deal(scheme, d, prg(Seed{}, d)).dealing);
  dealings[0].shares[1] = g.add(dealings[0].shares[1], g.scalar(1));
  dealings[2].shares[1] = g.add(dealings[2].shares[1], g.scalar(1));
  EXPECT_THROW(complete_dkg(scheme, dealings), std::runtime_error);
}

// ---- batch kernel ----------------------------------------------------------------

TEST(BatchVerify, ParallelMatchesSerial) {
  auto f = make_group(7);
  std::vector<ShareCheck> checks;
  for (int k = 0; k < 60; ++k) {
    auto m = to_bytes("batch" + std::to_string(k));
    const auto& sk = f.result.shares[k % 7];
    ShareCheck c{m, sk.index, sign_share(m, sk, *f.keys)};
    if (k % 5 == 0) c.index = c.index % 7 + 1;  // wrong key
    if (k % 7 == 3) c.message.push_back('!');   // wrong message
    checks.push_back(std::move(c));
  }
  auto serial = verify_shares_serial(*f.keys, checks);
  auto parallel = verify_shares_parallel(*f.keys, checks);
  EXPECT_EQ(serial, parallel);
  EXPECT_GT(std::count(serial.begin(), serial.end(), 1), 0);
  EXPECT_GT(std::count(serial.begin(), serial.end(), 0), 0);
}

}  // namespace
}  // namespace relay::crypto
