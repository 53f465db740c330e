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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stlforge/ast.hpp"
#include "stlforge/error.hpp"
#include "stlforge/tools.hpp"

namespace stlforge {

/// Half-open character range [begin, end) into a transcript.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const TextSpan&) const = default;
};

enum class SegmentKind { Reasoning, ToolCall, ToolResult, FinalAnswer };

std::string_view to_string(SegmentKind kind) noexcept;

struct Segment {
  SegmentKind kind;
  std::string text;  // inner text, tags stripped
  TextSpan span;     // whole block, tags included
};

enum class StageFailure {
  BadToolName,
  BadArgs,
  ExecFailed,
  Inconsistent,
  BadPredicateGrounding,
  UnjustifiedEventOp,
};

std::string_view to_string(StageFailure failure) noexcept;

struct StageVerdict {
  bool correct = true;
  std::optional<StageFailure> failure;
  std::string detail;

  static StageVerdict pass() { return {}; }
  static StageVerdict fail(StageFailure f, std::string detail) {
    return {false, f, std::move(detail)};
  }
};

enum class StageCategory { Tool, EventGrounding };

/// Alignment key for group-relative normalization: category, tool name (for
/// tool stages) and the 1-based ordinal of that role within the rollout.
struct StageRole {
  StageCategory category = StageCategory::Tool;
  std::string tool;
  std::size_t ordinal = 1;

  std::string key() const;
  bool operator==(const StageRole&) const = default;
};

struct Stage {
  std::size_t index = 1;  // 1-based, contiguous
  StageRole role;
  std::vector<std::size_t> segments;  // reasoning, call and result segments
  std::optional<std::size_t> call_segment;
  std::optional<std::size_t> result_segment;
  StageVerdict verdict;
};

/// A transcript split into `<think>`, `<tool_call>`, `<tool_result>` blocks
/// and the trailing final answer (bare text or an `<answer>` block).
struct Rollout {
  std::vector<Segment> segments;
  std::vector<std::size_t> final_segments;  // reasoning after the last result + answer
  std::optional<StlNode> parsed_final;
  std::string final_error;  // why parsed_final is empty
  std::vector<Stage> stages;
  std::size_t tool_rounds = 0;
};

enum class RolloutErrc { UnbalancedTags, NoFinalAnswer, TooManyToolRounds };

std::string_view to_string(RolloutErrc kind) noexcept;

class RolloutParseError : public KindedError<RolloutErrc> {
 public:
  using KindedError::KindedError;
};

/// Splits a transcript into segments and stages and decodes the final STL
/// JSON (a failed decode leaves `parsed_final` empty rather than throwing).
/// Stage verdicts are left at their default; see validate_stages.
Rollout parse_rollout(std::string_view transcript,
                      std::size_t max_tool_rounds = kMaxToolRounds);

/// Pulls the STL JSON out of a final-answer segment: strips code fences and
/// surrounding prose, then parses. Throws SchemaError.
StlNode extract_final_answer(std::string_view text);

/// Checks one stage in order: tool name, argument schema, re-execution
/// against the recorded result, incorporation into the final formula, and
/// predicate grounding against the reference. Event stages check that every
/// Rise/Fall in the final formula has a counterpart in the reference.
StageVerdict validate_stage(const Stage& stage, const Rollout& rollout,
                            const StlNode& reference, double tolerance);

/// Fills in every stage verdict.
void validate_stages(Rollout& rollout, const StlNode& reference, double tolerance);

}  // namespace stlforge
