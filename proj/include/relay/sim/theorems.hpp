/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "relay/sim/metrics.hpp"

namespace relay::sim {

enum class BoundKind { kSafety, kTiming, kProtocol, kLiveness, kStatistical, kInformational };

std::string kind_name(BoundKind k);

struct BoundResult {
  std::string name;
  BoundKind kind = BoundKind::kTiming;
  bool applicable = false;
  bool passed = true;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::string note;  // why the bound does not apply, or how it was evaluated
  std::vector<nlohmann::json> witnesses;
  nlohmann::json info = nlohmann::json::object();
};

struct Report {
  std::string scenario;
  std::vector<BoundResult> bounds;

  /// False iff an applicable safety bound failed.
  bool safety_ok() const;
  const BoundResult& at(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Smallest k with beta^k >= 2^rho_log2, i.e. ceil(-log_beta(rho)).
std::uint64_t growth_parameter(const mpq_class& beta, unsigned rho_log2);

/// Whether the top-rank process X_r is (epsilon, eta)-typical for success
/// probability p: every run of >= eta consecutive rounds deviates from its
/// expectation by a relative amount < epsilon.
bool is_typical(const std::vector<bool>& adversarial_top, const mpq_class& p, const mpq_class& epsilon,
                std::uint64_t eta);

/// Evaluates every checkable bound. Failures are report content, never
/// exceptions.
Report assert_theorems(const Metrics& metrics, const Scenario& scenario);

}  // namespace relay::sim
