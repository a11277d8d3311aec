/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>

#include "relay/sim/metrics.hpp"
#include "relay/sim/theorems.hpp"

namespace relay::sim {

/// Writes rounds.csv, observers.csv, metrics.json, summary.json, report.json
/// and finalized/<observer>.log into `dir` (created if missing).
void write_run(const std::filesystem::path& dir, const Metrics& metrics, const Report& report);

/// Reads metrics.json back from a directory written by write_run.
Metrics load_metrics(const std::filesystem::path& dir);

nlohmann::json summary_json(const Metrics& metrics, const Report& report);

}  // namespace relay::sim
