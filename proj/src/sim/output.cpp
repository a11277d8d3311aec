/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/sim/output.hpp"

#include <fstream>
#include <stdexcept>

namespace relay::sim {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

nlohmann::json summary_json(const Metrics& m, const Report& report) {
  std::uint64_t normal = 0;
  for (const auto& r : m.rounds) normal += r.notarized_count == 1 ? 1 : 0;
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& b : report.bounds) {
    if (b.applicable && !b.passed) failed.push_back(b.name);
  }
  return {{"schema_version", 1},
          {"scenario", m.scenario},
          {"rounds", m.rounds.size()},
          {"normal_rounds", normal},
          {"honest_replicas", m.honest_replicas},
          {"min_honest_round", m.min_honest_round},
          {"max_honest_round", m.max_honest_round},
          {"horizon_reached", m.horizon_reached},
          {"hit_time_cap", m.hit_time_cap},
          {"end_time", m.end_time.to_string()},
          {"events", m.events},
          {"deliveries", m.deliveries},
          {"dropped", m.dropped},
          {"rejected", m.rejected},
          {"violations",
           {{"consistency", m.consistency_violations.size()},
            {"append_only", m.append_only_violations.size()},
            {"consistency_low_t", m.low_t_consistency_violations.size()},
            {"append_only_low_t", m.low_t_append_only_violations.size()},
            {"beacon_disagreements", m.beacon_disagreements.size()}}},
          {"max_skew", report.at("round_skew").info.value("max_skew", 0)},
          {"beacon_partitions", report.at("beacon_pause").info},
          {"safety_ok", report.safety_ok()},
          {"failed_bounds", failed}};
}

void write_run(const std::filesystem::path& dir, const Metrics& metrics, const Report& report) {
  std::filesystem::create_directories(dir / "finalized");
  write_file(dir / "rounds.csv", metrics.rounds_csv());
  write_file(dir / "observers.csv", metrics.observers_csv());
  write_file(dir / "metrics.json", metrics.to_json().dump(1) + "\n");
  write_file(dir / "summary.json", summary_json(metrics, report).dump(2) + "\n");
  write_file(dir / "report.json", report.to_json().dump(2) + "\n");
  for (const auto& o : metrics.observers) write_file(dir / "finalized" / (o.name + ".log"), o.log);
}

Metrics load_metrics(const std::filesystem::path& dir) {
  std::ifstream in(dir / "metrics.json");
  if (!in) throw std::invalid_argument("no metrics.json in " + dir.string());
  return Metrics::from_json(nlohmann::json::parse(in));
}

}  // namespace relay::sim
