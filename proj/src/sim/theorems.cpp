/*
 * Copyright 2026 The relay-consensus Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "relay/sim/theorems.hpp"

#include <deque>
#include <map>
#include <stdexcept>

namespace relay::sim {

namespace {

using nlohmann::json;

constexpr std::size_t kWitnessLimit = 10;

std::string t(const OptTime& v) { return time_string(v); }

bool finite(const OptTime& v) { return v && !v->is_infinite(); }

// Fails the bound with a witness; the first few witnesses are kept.
void fail(BoundResult& b, json witness) {
  b.passed = false;
  ++b.failures;
  if (b.witnesses.size() < kWitnessLimit) b.witnesses.push_back(std::move(witness));
}

void skip(BoundResult& b, std::string why) {
  b.applicable = false;
  b.note = std::move(why);
}

// Checks lhs <= rhs where a missing side means the bound is vacuous and an
// infinite lhs (the event never reached every honest replica) is a failure.
void check_le(BoundResult& b, std::uint64_t round, const OptTime& lhs, const OptTime& rhs, SimTime rhs_offset) {
  if (!lhs || !rhs || rhs->is_infinite()) return;
  ++b.checked;
  SimTime bound = *rhs + rhs_offset;
  if (lhs->is_infinite() || bound < *lhs) {
    fail(b, {{"round", round}, {"value", t(lhs)}, {"bound", bound.to_string()}});
  }
}

}  // namespace

std::string kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::kSafety: return "safety";
    case BoundKind::kTiming: return "timing";
    case BoundKind::kProtocol: return "protocol";
    case BoundKind::kLiveness: return "liveness";
    case BoundKind::kStatistical: return "statistical";
    case BoundKind::kInformational: return "informational";
  }
  return "unknown";
}

bool Report::safety_ok() const {
  for (const auto& b : bounds) {
    if (b.kind == BoundKind::kSafety && b.applicable && !b.passed) return false;
  }
  return true;
}

const BoundResult& Report::at(const std::string& name) const {
  for (const auto& b : bounds) {
    if (b.name == name) return b;
  }
  throw std::out_of_range("no bound named " + name);
}

json Report::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["scenario"] = scenario;
  j["safety_ok"] = safety_ok();
  j["bounds"] = json::array();
  for (const auto& b : bounds) {
    j["bounds"].push_back({{"name", b.name},
                           {"kind", kind_name(b.kind)},
                           {"applicable", b.applicable},
                           {"passed", b.passed},
                           {"checked", b.checked},
                           {"failures", b.failures},
                           {"note", b.note},
                           {"witnesses", b.witnesses},
                           {"info", b.info}});
  }
  return j;
}

std::uint64_t growth_parameter(const mpq_class& beta, unsigned rho_log2) {
  if (beta <= 1) throw std::invalid_argument("beta must exceed 1");
  mpz_class target = 1;
  target <<= rho_log2;
  mpq_class power = 1;
  std::uint64_t k = 0;
  while (power < target) {
    power *= beta;
    ++k;
  }
  return k;
}

bool is_typical(const std::vector<bool>& adversarial_top, const mpq_class& p, const mpq_class& epsilon,
                std::uint64_t eta) {
  const auto n = adversarial_top.size();
  if (eta == 0) throw std::invalid_argument("eta must be positive");
  std::vector<std::int64_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + (adversarial_top[i] ? 1 : 0);
  const mpz_class a = p.get_num(), b = p.get_den(), c = epsilon.get_num(), d = epsilon.get_den();
  if (a == 0) return prefix[n] == 0;
  // |X b - len a| d < c len a, all in integers.
  const auto ai = a.get_si(), bi = b.get_si(), ci = c.get_si(), di = d.get_si();
  for (std::size_t len = eta; len <= n; ++len) {
    for (std::size_t s = 0; s + len <= n; ++s) {
      std::int64_t x = prefix[s + len] - prefix[s];
      __int128 dev = static_cast<__int128>(x) * bi - static_cast<__int128>(len) * ai;
      if (dev < 0) dev = -dev;
      if (!(dev * di < static_cast<__int128>(ci) * static_cast<__int128>(len) * ai)) return false;
    }
  }
  return true;
}

Report assert_theorems(const Metrics& m, const Scenario& s) {
  Report report;
  report.scenario = s.name;
  const auto& rounds = m.rounds;
  const std::uint64_t R = rounds.size();
  const SimTime delta = s.delta, bt = s.block_time;
  const bool sync = s.delay.synchronous();
  const bool no_part = s.partitions.empty();
  const bool timing = sync && no_part;
  const bool bt3 = bt >= delta * 3;

  bool honest_quorum = true;   // every group has t honest members
  bool no_byz_quorum = true;   // no group has t Byzantine members
  for (std::size_t j = 0; j < m.group_thresholds.size(); ++j) {
    const auto t_j = m.group_thresholds[j];
    if (m.honest_group_members[j] < t_j) honest_quorum = false;
    if (s.effective_group_size() - m.honest_group_members[j] >= t_j) no_byz_quorum = false;
  }
  auto round = [&](std::uint64_t r) -> const RoundMetrics& { return rounds[r - 1]; };
  const char* kTimingNote = "needs a synchronous network without partitions";

  std::deque<BoundResult> bounds;  // stable references while adding
  auto add = [&](std::string name, BoundKind kind) -> BoundResult& {
    auto& b = bounds.emplace_back();
    b.name = std::move(name);
    b.kind = kind;
    b.applicable = true;
    return b;
  };

  {  // tau-bar(r) <= tau-under(r) + delta
    auto& b = add("entry_spread", BoundKind::kTiming);
    if (!timing) skip(b, kTimingNote);
    for (std::uint64_t r = 1; b.applicable && r <= R; ++r) check_le(b, r, round(r).tau_max, round(r).tau_min, delta);
  }
  {  // honest round numbers differ by at most one: tau-bar(r) <= tau-under(r+1)
    auto& b = add("round_skew", BoundKind::kTiming);
    if (!timing) skip(b, kTimingNote);
    if (bt < delta) skip(b, "needs BlockTime >= delta");
    std::uint64_t max_skew = 0;
    for (std::uint64_t r = 1; r <= R; ++r) {
      if (!finite(round(r).tau_max)) continue;
      std::uint64_t k = 0;
      while (r + k + 1 <= R && round(r + k + 1).tau_min && *round(r + k + 1).tau_min < *round(r).tau_max) ++k;
      max_skew = std::max(max_skew, k + 1);
    }
    b.info["max_skew"] = max_skew;
    for (std::uint64_t r = 1; b.applicable && r < R; ++r) check_le(b, r, round(r).tau_max, round(r + 1).tau_min, {});
  }
  {  // tau-under(r) + BlockTime <= tau-under*(r+1)
    auto& b = add("notarization_fast_bound", BoundKind::kTiming);
    if (!no_byz_quorum) skip(b, "a group has a Byzantine quorum");
    for (std::uint64_t r = 1; b.applicable && r < R; ++r) {
      const auto& lo = round(r).tau_min;
      const auto& hi = round(r + 1).tau_star_min;
      if (!finite(lo) || !finite(hi)) continue;
      ++b.checked;
      if (*hi < *lo + bt) fail(b, {{"round", r}, {"tau_min", t(lo)}, {"next_tau_star_min", t(hi)}});
    }
  }
  {  // tau-bar(r) + BlockTime - delta <= tau-under*(r+1)
    auto& b = add("maximal_progress", BoundKind::kTiming);
    if (!timing) skip(b, kTimingNote);
    if (bt < delta) skip(b, "needs BlockTime >= delta");
    if (!no_byz_quorum) skip(b, "a group has a Byzantine quorum");
    for (std::uint64_t r = 1; b.applicable && r < R; ++r) {
      const auto& lo = round(r).tau_max;
      const auto& hi = round(r + 1).tau_star_min;
      if (!finite(lo) || !finite(hi)) continue;
      ++b.checked;
      if (*hi < *lo + bt - delta) fail(b, {{"round", r}, {"tau_max", t(lo)}, {"next_tau_star_min", t(hi)}});
    }
  }
  {  // tau-bar(xi_r) <= tau-under(r) + 2 delta
    auto& b = add("beacon_slow_bound", BoundKind::kTiming);
    if (!timing) skip(b, kTimingNote);
    if (!honest_quorum) skip(b, "a group lacks t honest members");
    for (std::uint64_t r = 1; b.applicable && r <= R; ++r) check_le(b, r, round(r).xi_max, round(r).tau_min, delta * 2);
  }
  {  // honest proposals saturate by tau-under(r) + BlockTime
    auto& b = add("timely_publication", BoundKind::kTiming);
    if (!timing) skip(b, kTimingNote);
    if (!bt3) skip(b, "needs BlockTime >= 3 delta");
    if (!honest_quorum) skip(b, "a group lacks t honest members");
    for (std::uint64_t r = 1; b.applicable && r <= R; ++r) {
      check_le(b, r, round(r).honest_block_max_seen, round(r).tau_min, bt);
    }
  }
  {  // honest top rank => exactly one notarized block
    auto& b = add("normal_operation", BoundKind::kTiming);
    if (!timing) skip(b, kTimingNote);
    if (!bt3) skip(b, "needs BlockTime >= 3 delta");
    if (!honest_quorum) skip(b, "a group lacks t honest members");
    std::uint64_t normal = 0;
    for (std::uint64_t r = 1; r <= R; ++r) {
      normal += round(r).notarized_count == 1 ? 1 : 0;
      if (!b.applicable || !round(r).top_rank_honest) continue;
      ++b.checked;
      if (round(r).notarized_count != 1) fail(b, {{"round", r}, {"notarized_count", round(r).notarized_count}});
    }
    b.info["normal_rounds"] = normal;
    b.info["rounds"] = R;
  }
  {  // tau-under(r+1) <= tau-under(r) + BlockTime + (d+2) delta
    auto& progress = add("minimal_progress", BoundKind::kTiming);
    auto& improved = add("progress_d0_improved", BoundKind::kInformational);
    if (!timing) skip(progress, kTimingNote);
    if (!bt3) skip(progress, "needs BlockTime >= 3 delta");
    if (!honest_quorum) skip(progress, "a group lacks t honest members");
    improved.applicable = progress.applicable;
    improved.note = "stated without proof for d = 0: tau-under(r+1) <= tau-under(r) + BlockTime + delta";
    if (!progress.applicable) improved.note = progress.note;
    for (std::uint64_t r = 1; progress.applicable && r < R; ++r) {
      const auto& d = round(r).best_honest_rank;
      if (!d) continue;
      check_le(progress, r, round(r + 1).tau_min, round(r).tau_min, bt + delta * static_cast<std::int64_t>(*d + 2));
      if (*d == 0) check_le(improved, r, round(r + 1).tau_min, round(r).tau_min, bt + delta);
    }
  }
  {  // tau-bar(z_r) <= tau-bar(r+2) + delta for referenced notarizations
    auto& b = add("referenced_window", BoundKind::kTiming);
    if (!timing) skip(b, kTimingNote);
    for (std::uint64_t r = 1; b.applicable && r + 2 <= R; ++r) {
      check_le(b, r, round(r).referenced_nota_max, round(r + 2).tau_max, delta);
    }
  }
  {  // tau-bar(z_r) <= tau-under(r+3) when BlockTime >= 2 delta
    auto& b = add("referenced_window_round_end", BoundKind::kTiming);
    if (!timing) skip(b, kTimingNote);
    if (bt < delta * 2) skip(b, "needs BlockTime >= 2 delta");
    for (std::uint64_t r = 1; b.applicable && r + 3 <= R; ++r) {
      check_le(b, r, round(r).referenced_nota_max, round(r + 3).tau_min, {});
    }
  }
  {  // normal round r is final by (second confirmation's notarization) + 2 delta
    auto& b = add("finality_latency", BoundKind::kTiming);
    std::vector<const ObserverMetrics*> eligible;
    for (const auto& o : m.observers) {
      if (o.mode == finality::Mode::kTimer && o.T == delta * 2) eligible.push_back(&o);
    }
    if (!timing) skip(b, kTimingNote);
    if (eligible.empty()) skip(b, "no timer observer with T = 2 delta");
    b.info["observers"] = eligible.size();
    for (const auto* o : eligible) {
      if (!b.applicable) break;
      for (std::uint64_t r = 1; r <= R; ++r) {
        if (round(r).notarized_count != 1) continue;
        ++b.checked;
        if (r > o->chain.size()) {
          fail(b, {{"observer", o->name}, {"round", r}, {"reason", "never finalized"}});
          continue;
        }
        const auto& rec = o->chain[r - 1];
        if (!rec.finalized_at || !rec.confirmation_at || *rec.confirmation_at + delta * 2 < *rec.finalized_at) {
          fail(b, {{"observer", o->name},
                   {"round", r},
                   {"finalized_at", t(rec.finalized_at)},
                   {"confirmation_at", t(rec.confirmation_at)}});
        }
      }
    }
  }
  auto safety_applicability = [&](BoundResult& b, bool any_observer) {
    if (!timing) skip(b, kTimingNote);
    if (!no_byz_quorum) skip(b, "a group has a Byzantine quorum");
    if (!any_observer) skip(b, "no observer in this class");
  };
  bool any_safe = false, any_low = false;
  for (const auto& o : m.observers) (o.safe ? any_safe : any_low) = true;
  {
    auto& b = add("consistency", BoundKind::kSafety);
    safety_applicability(b, any_safe);
    b.checked = m.finalize_events_checked;
    for (const auto& w : m.consistency_violations) fail(b, w);
    // Independent re-check of the final chains.
    std::map<std::uint64_t, std::pair<std::string, std::string>> seen;
    for (const auto& o : m.observers) {
      if (!o.safe) continue;
      for (const auto& rec : o.chain) {
        auto [it, fresh] = seen.emplace(rec.height, std::make_pair(rec.digest, o.name));
        if (!fresh && it->second.first != rec.digest) {
          fail(b, {{"observer", o.name}, {"height", rec.height}, {"conflicts_with", it->second.second}});
        }
      }
    }
  }
  {
    auto& b = add("append_only", BoundKind::kSafety);
    safety_applicability(b, any_safe);
    b.checked = m.finalize_events_checked;
    for (const auto& w : m.append_only_violations) fail(b, w);
  }
  {
    auto& b = add("consistency_low_t", BoundKind::kInformational);
    if (!any_low) skip(b, "no observer below the T >= 2 delta hypothesis");
    b.checked = m.low_t_finalize_events_checked;
    for (const auto& w : m.low_t_consistency_violations) fail(b, w);
  }
  {
    auto& b = add("append_only_low_t", BoundKind::kInformational);
    if (!any_low) skip(b, "no observer below the T >= 2 delta hypothesis");
    b.checked = m.low_t_finalize_events_checked;
    for (const auto& w : m.low_t_append_only_violations) fail(b, w);
  }
  {
    auto& b = add("beacon_agreement", BoundKind::kSafety);
    b.checked = R;
    for (const auto& w : m.beacon_disagreements) fail(b, w);
  }
  {
    auto& b = add("signature_timing", BoundKind::kProtocol);
    for (std::uint64_t r = 1; r <= R; ++r) {
      const auto& slack = round(r).min_sign_slack;
      if (!slack) continue;
      ++b.checked;
      if (*slack < SimTime{}) fail(b, {{"round", r}, {"min_slack", t(slack)}});
    }
  }
  {  // finalized length at the end of round r >= r - k, failing fraction <= rho
    auto& b = add("chain_growth", BoundKind::kStatistical);
    if (!timing) skip(b, kTimingNote);
    if (!bt3) skip(b, "needs BlockTime >= 3 delta");
    if (!honest_quorum) skip(b, "a group lacks t honest members");
    const auto k = growth_parameter(s.beta, s.growth_rho_log2);
    std::uint64_t failing = 0;
    for (std::uint64_t r = 1; r <= R; ++r) {
      const auto& len = round(r).min_final_len;
      if (!len) continue;
      ++b.checked;
      if (*len + k < r) {
        ++failing;
        if (b.witnesses.size() < kWitnessLimit) b.witnesses.push_back({{"round", r}, {"min_final_len", *len}});
      }
    }
    b.failures = failing;
    // failing / checked <= 2^-bits
    mpz_class lhs = failing;
    lhs <<= s.growth_rho_log2;
    b.passed = lhs <= mpz_class(static_cast<unsigned long>(b.checked));
    b.info["k"] = k;
    b.info["rho_log2"] = s.growth_rho_log2;
    b.info["allowed_failures"] = b.checked >> s.growth_rho_log2;
  }
  {  // every eta-window of the finalized chain has >= mu eta honest blocks
    auto& b = add("chain_quality", BoundKind::kStatistical);
    if (!timing) skip(b, kTimingNote);
    if (!bt3) skip(b, "needs BlockTime >= 3 delta");
    if (!honest_quorum) skip(b, "a group lacks t honest members");
    const auto eta = s.quality_window;
    const mpq_class mu = (1 - 1 / s.beta) * (1 - s.quality_epsilon);
    std::vector<int> honest;
    for (const auto& r : rounds) {
      if (!r.final_owner_honest) break;
      honest.push_back(*r.final_owner_honest ? 1 : 0);
    }
    if (honest.size() < eta) skip(b, "finalized chain shorter than one window");
    std::uint64_t worst = eta;
    if (honest.size() >= eta) {
      std::uint64_t sum = 0;
      for (std::size_t i = 0; i < honest.size(); ++i) {
        sum += honest[i];
        if (i + 1 < eta) continue;
        if (i + 1 > eta) sum -= honest[i - eta];
        worst = std::min(worst, sum);
        if (!b.applicable) continue;
        ++b.checked;
        if (mpq_class(static_cast<unsigned long>(sum)) < mu * static_cast<unsigned long>(eta)) {
          fail(b, {{"first_height", i + 2 - eta}, {"honest_blocks", sum}, {"window", eta}});
        }
      }
    }
    std::vector<bool> adv_top;
    std::uint64_t adv = 0;
    for (const auto& r : rounds) {
      adv_top.push_back(!r.top_rank_honest);
      adv += r.top_rank_honest ? 0 : 1;
    }
    std::uint64_t byz = 0;
    for (const auto& a : s.adversaries) byz += a.replicas.size();
    const mpq_class p(static_cast<unsigned long>(byz), static_cast<unsigned long>(s.universe));
    b.info["mu"] = mu.get_str();
    b.info["window"] = eta;
    b.info["worst_window_honest"] = worst;
    b.info["adversarial_top_rank_rounds"] = adv;
    const bool typical = R >= eta && is_typical(adv_top, p, s.quality_epsilon, eta);
    b.info["typical"] = typical;
    if (b.failures > 0 && !typical) b.note = "execution is not typical; the bound is claimed for typical executions";
  }
  {
    auto& b = add("liveness", BoundKind::kLiveness);
    if (!sync) skip(b, "needs a synchronous network");
    if (!bt3) skip(b, "needs BlockTime >= 3 delta");
    if (!honest_quorum) skip(b, "a group lacks t honest members");
    b.checked = 1;
    if (!m.horizon_reached) {
      fail(b, {{"min_honest_round", m.min_honest_round}, {"hit_time_cap", m.hit_time_cap}});
    }
    b.info["min_honest_round"] = m.min_honest_round;
    b.info["max_honest_round"] = m.max_honest_round;
  }
  {
    // During a partition a component holding fewer than t honest group
    // members produces no beacon output once messages sent before the cut
    // have drained; a component with t or more keeps producing. After the
    // heal, production resumes within two rounds.
    auto& pause = add("beacon_pause", BoundKind::kTiming);
    auto& resume = add("beacon_resume", BoundKind::kTiming);
    const SimTime settle = (bt + delta * 3) * 2;
    const SimTime slow_round = bt + delta * static_cast<std::int64_t>(s.universe + 1);
    const SimTime resume_within = (bt + delta * 3) * 2;
    if (m.partitions.empty()) {
      skip(pause, "no partitions");
      skip(resume, "no partitions");
    } else if (s.group_count != 1) {
      skip(pause, "evaluated for a single group only");
      skip(resume, "evaluated for a single group only");
    }
    const auto t_g = m.group_thresholds.empty() ? 0 : m.group_thresholds[0];
    pause.info["settle"] = settle.to_string();
    resume.info["within"] = resume_within.to_string();
    json comps = json::array();
    for (std::size_t k = 0; k < m.partitions.size() && pause.applicable; ++k) {
      const auto& p = m.partitions[k];
      if (!p.start || !p.end) {
        ++pause.checked;
        fail(pause, {{"partition", k}, {"reason", "never started"}});
        continue;
      }
      for (std::size_t c = 0; c < p.components.size(); ++c) {
        const auto& comp = p.components[c];
        std::uint64_t late = 0;
        for (const auto& [r, time] : comp.productions) late += (time >= *p.start + settle) ? 1 : 0;
        const bool expect_stall = comp.honest_members < t_g;
        const SimTime window = *p.end - *p.start - settle;
        std::uint64_t expected = 0;
        if (!expect_stall && SimTime{} < window) expected = std::max<std::int64_t>(1, window.ticks() / slow_round.ticks());
        comps.push_back({{"partition", k},
                         {"component", c},
                         {"honest_members", comp.honest_members},
                         {"expect_stall", expect_stall},
                         {"productions_after_settle", late},
                         {"productions", comp.productions.size()}});
        ++pause.checked;
        if (expect_stall ? late != 0 : late < expected) {
          fail(pause, {{"partition", k}, {"component", c}, {"productions_after_settle", late}, {"expected_min", expected}});
        }
      }
      // First new beacon output after the heal.
      OptTime first_after;
      for (const auto& r : rounds) {
        if (r.xi_min && *p.end <= *r.xi_min) {
          first_after = r.xi_min;
          break;
        }
      }
      ++resume.checked;
      if (!first_after || *p.end + resume_within < *first_after) {
        fail(resume, {{"partition", k}, {"heal", t(p.end)}, {"first_after_heal", t(first_after)}});
      }
      resume.info["first_after_heal_" + std::to_string(k)] = t(first_after);
    }
    pause.info["components"] = comps;
  }
  report.bounds.assign(std::make_move_iterator(bounds.begin()), std::make_move_iterator(bounds.end()));
  return report;
}

}  // namespace relay::sim
