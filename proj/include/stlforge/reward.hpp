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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stlforge/ast.hpp"
#include "stlforge/error.hpp"
#include "stlforge/rollout.hpp"

namespace stlforge {

struct RewardConfig {
  double tau = 0.5;        // outcome bound on process reward when the final tree is wrong
  double kappa = 0.3;      // cap on partial tree-match credit
  double tolerance = 0.1;  // numeric tolerance for matching and stage checks
  double epsilon = 1e-8;
  std::size_t group_size = 8;
  std::size_t max_tool_rounds = kMaxToolRounds;

  /// Throws ConfigError unless 0 < tau < 1, 0 <= kappa < 1, tolerance >= 0,
  /// epsilon > 0 and group_size >= 1.
  void validate() const;
};

struct OutcomeScore {
  double r_fmt = 0.0;
  double s_tree = 0.0;
  double r_cnt = 0.0;
  double r_out = 0.0;
  double c_final = 0.0;
};

/// r_fmt from the parsed final answer, s_tree from tree_match, r_cnt with
/// the kappa cap below an exact match, r_out = r_fmt * r_cnt.
OutcomeScore score_outcome(const Rollout& rollout, const StlNode& reference,
                           const RewardConfig& cfg);

/// r[k] = prod_{l<k} c_l * (c_final + tau (1 - c_final)) * c_k.
std::vector<double> process_rewards(const std::vector<bool>& verdicts, bool c_final,
                                    const RewardConfig& cfg);

struct StageReward {
  std::size_t index = 1;
  StageRole role;
  StageVerdict verdict;
  double reward = 0.0;
  double advantage = 0.0;
  bool prefix_blocked = false;  // some earlier stage failed
};

struct RewardReport {
  std::string group_id;
  std::string id;
  std::optional<std::string> parse_error;
  bool truncated = false;
  OutcomeScore outcome;
  std::vector<StageReward> stages;
  double a_out = 0.0;
  std::vector<double> token_advantages;
  std::vector<std::uint8_t> token_mask;
  std::optional<Rollout> rollout;
};

enum class RewardErrc { DegenerateGroup, BadTokenSpans };

std::string_view to_string(RewardErrc kind) noexcept;

class RewardError : public KindedError<RewardErrc> {
 public:
  using KindedError::KindedError;
};

/// Parses, validates and scores one transcript. Parse failures and truncated
/// rollouts come back as zero-reward reports, never as exceptions.
RewardReport score_rollout(std::string_view transcript, const StlNode& reference,
                           const RewardConfig& cfg, bool truncated = false);

/// Group-relative advantages for the outcome reward and for each aligned
/// stage role. Roles held by a single rollout get advantage 0. Throws
/// RewardError(DegenerateGroup) for fewer than two reports.
void group_advantages(std::span<RewardReport> reports, const RewardConfig& cfg);

/// Per-token advantage and mask. A token belongs to the segment containing
/// its first character. Spans must be ordered, disjoint and inside the
/// transcript, else RewardError(BadTokenSpans).
void token_labels(RewardReport& report, std::span<const TextSpan> tokens,
                  std::size_t transcript_length);

/// Maximal runs of non-whitespace, for callers without a tokenizer.
std::vector<TextSpan> whitespace_tokens(std::string_view text);

nlohmann::ordered_json to_json(const RewardReport& report);

}  // namespace stlforge
