// Copyright 2026 The stlforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stlforge/reward.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "stlforge/matcher.hpp"

namespace stlforge {

std::string_view to_string(RewardErrc kind) noexcept {
  switch (kind) {
    case RewardErrc::DegenerateGroup: return "DegenerateGroup";
    case RewardErrc::BadTokenSpans: return "BadTokenSpans";
  }
  return "?";
}

void RewardConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
  if (!(kappa >= 0.0 && kappa < 1.0)) throw ConfigError("kappa must lie in [0, 1)");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (group_size < 1) throw ConfigError("group size must be at least 1");
}

OutcomeScore score_outcome(const Rollout& rollout, const StlNode& reference,
                           const RewardConfig& cfg) {
  OutcomeScore o;
  if (!rollout.parsed_final) return o;
  MatchConfig mc;
  mc.numeric_tolerance = cfg.tolerance;
  const MatchScore m = tree_match(*rollout.parsed_final, reference, mc);
  o.r_fmt = 1.0;
  o.s_tree = m.value;
  o.r_cnt = m.exact ? 1.0 : cfg.kappa * m.value;
  o.r_out = o.r_fmt * o.r_cnt;
  o.c_final = m.exact ? 1.0 : 0.0;
  return o;
}

std::vector<double> process_rewards(const std::vector<bool>& verdicts, bool c_final,
                                    const RewardConfig& cfg) {
  const double bound = c_final ? 1.0 : cfg.tau;
  std::vector<double> out;
  out.reserve(verdicts.size());
  bool prefix = true;
  for (bool c : verdicts) {
    out.push_back(prefix && c ? bound : 0.0);
    prefix = prefix && c;
  }
  return out;
}

RewardReport score_rollout(std::string_view transcript, const StlNode& reference,
                           const RewardConfig& cfg, bool truncated) {
  RewardReport report;
  report.truncated = truncated;
  if (truncated) return report;
  try {
    report.rollout = parse_rollout(transcript, cfg.max_tool_rounds);
  } catch (const RolloutParseError& e) {
    report.parse_error = std::string(to_string(e.kind())) + ": " + e.what();
    return report;
  }
  Rollout& r = *report.rollout;
  validate_stages(r, reference, cfg.tolerance);
  report.outcome = score_outcome(r, reference, cfg);

  std::vector<bool> verdicts;
  for (const Stage& s : r.stages) verdicts.push_back(s.verdict.correct);
  const auto rewards = process_rewards(verdicts, report.outcome.c_final == 1.0, cfg);
  bool prefix = true;
  for (std::size_t k = 0; k < r.stages.size(); ++k) {
    const Stage& s = r.stages[k];
    report.stages.push_back({s.index, s.role, s.verdict, rewards[k], 0.0, !prefix});
    prefix = prefix && s.verdict.correct;
  }
  return report;
}

namespace {

// (x - mean) / (population std + eps) over the given values; all zero for
// fewer than two values. Equal values short-circuit to zero because the
// rounded mean of identical doubles need not equal them.
std::vector<double> normalize(const std::vector<double>& xs, double eps) {
  std::vector<double> out(xs.size(), 0.0);
  if (xs.size() < 2) return out;
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) return out;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - mean) / (sd + eps);
  return out;
}

}  // namespace

void group_advantages(std::span<RewardReport> reports, const RewardConfig& cfg) {
  if (reports.size() < 2) {
    throw RewardError(RewardErrc::DegenerateGroup,
                      "group advantages need at least two rollouts, got " +
                          std::to_string(reports.size()));
  }
  std::vector<double> outs;
  for (const RewardReport& r : reports) outs.push_back(r.outcome.r_out);
  const auto a_out = normalize(outs, cfg.epsilon);
  for (std::size_t i = 0; i < reports.size(); ++i) reports[i].a_out = a_out[i];

  std::map<std::string, std::vector<StageReward*>> by_role;
  for (RewardReport& r : reports) {
    for (StageReward& s : r.stages) by_role[s.role.key()].push_back(&s);
  }
  for (auto& [key, members] : by_role) {
    std::vector<double> xs;
    for (const StageReward* s : members) xs.push_back(s->reward);
    const auto adv = normalize(xs, cfg.epsilon);
    for (std::size_t i = 0; i < members.size(); ++i) members[i]->advantage = adv[i];
  }
}

void token_labels(RewardReport& report, std::span<const TextSpan> tokens,
                  std::size_t transcript_length) {
  std::size_t prev_end = 0;
  for (const TextSpan& t : tokens) {
    if (t.begin > t.end || t.begin < prev_end || t.end > transcript_length) {
      throw RewardError(RewardErrc::BadTokenSpans,
                        "token span [" + std::to_string(t.begin) + ", " +
                            std::to_string(t.end) + ") is out of order or out of range");
    }
    prev_end = t.end;
  }

  report.token_advantages.assign(tokens.size(), 0.0);
  report.token_mask.assign(tokens.size(), 0);
  if (report.truncated || report.parse_error || !report.rollout) return;

  const Rollout& r = *report.rollout;
  struct Label {
    double advantage = 0.0;
    std::uint8_t mask = 0;
  };
  std::vector<Label> by_segment(r.segments.size());
  for (std::size_t seg : r.final_segments) by_segment[seg] = {report.a_out, 1};
  for (std::size_t k = 0; k < r.stages.size(); ++k) {
    const Stage& s = r.stages[k];
    const StageReward& sr = report.stages[k];
    for (std::size_t seg : s.segments) {
      const bool env = r.segments[seg].kind == SegmentKind::ToolResult;
      by_segment[seg] = {sr.advantage, static_cast<std::uint8_t>(!env && !sr.prefix_blocked)};
    }
  }

  std::size_t seg = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    while (seg + 1 < r.segments.size() && r.segments[seg + 1].span.begin <= tokens[i].begin) {
      ++seg;
    }
    if (r.segments.empty()) break;
    report.token_advantages[i] = by_segment[seg].advantage;
    report.token_mask[i] = by_segment[seg].mask;
  }
}

std::vector<TextSpan> whitespace_tokens(std::string_view text) {
  std::vector<TextSpan> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > begin) out.push_back({begin, i});
  }
  return out;
}

nlohmann::ordered_json to_json(const RewardReport& report) {
  nlohmann::ordered_json j;
  j["group_id"] = report.group_id;
  j["id"] = report.id;
  j["parse_error"] = report.parse_error ? nlohmann::ordered_json(*report.parse_error)
                                        : nlohmann::ordered_json(nullptr);
  j["truncated"] = report.truncated;
  j["r_fmt"] = report.outcome.r_fmt;
  j["s_tree"] = report.outcome.s_tree;
  j["r_cnt"] = report.outcome.r_cnt;
  j["r_out"] = report.outcome.r_out;
  j["c_final"] = report.outcome.c_final;
  j["a_out"] = report.a_out;
  auto r_proc = nlohmann::ordered_json::array();
  auto stages = nlohmann::ordered_json::array();
  for (const StageReward& s : report.stages) {
    r_proc.push_back(s.reward);
    nlohmann::ordered_json st;
    st["index"] = s.index;
    st["role"] = s.role.key();
    st["correct"] = s.verdict.correct;
    st["failure"] = s.verdict.failure
                        ? nlohmann::ordered_json(std::string(to_string(*s.verdict.failure)))
                        : nlohmann::ordered_json(nullptr);
    st["detail"] = s.verdict.detail;
    st["reward"] = s.reward;
    st["advantage"] = s.advantage;
    st["prefix_blocked"] = s.prefix_blocked;
    stages.push_back(std::move(st));
  }
  j["r_proc"] = std::move(r_proc);
  j["stages"] = std::move(stages);
  j["token_advantages"] = report.token_advantages;
  j["token_mask"] = report.token_mask;
  return j;
}

}  // namespace stlforge
