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

#include <doctest.h>

#include <string>

#include "stlforge/ast.hpp"
#include "stlforge/rollout.hpp"

using namespace stlforge;

namespace {

constexpr const char* kThink =
    "<think>\nThe requirement uses \"30 minutes\", which should be converted to seconds.\n</think>\n";

std::string answer(const std::string& time_hi, const std::string& body = R"("altitude>3048.0")") {
  return R"(<answer>{"STL":{"Operation":"Finally","Time":[0,)" + time_hi +
         R"(],"Leftaction":null,"Rightaction":)" + body + "}}</answer>";
}

std::string duration_transcript(const std::string& result, const std::string& time_hi) {
  return std::string(kThink) + "<tool_call>\nparse_duration(\"30 minutes\")\n</tool_call>\n<tool_result>\n" +
         result + "\n</tool_result>\n" + answer(time_hi);
}

const StlNode& reference() {
  static const StlNode ref = StlNode::temporal(Op::Finally, {0, 1800}, StlNode::atom("altitude>3048.0"));
  return ref;
}

RolloutErrc parse_kind(const std::string& text, std::size_t rounds = kMaxToolRounds) {
  try {
    parse_rollout(text, rounds);
  } catch (const RolloutParseError& e) {
    return e.kind();
  }
  FAIL("expected a parse error for: " << text);
  return RolloutErrc::UnbalancedTags;
}

StageVerdict only_stage_verdict(const std::string& text) {
  Rollout r = parse_rollout(text);
  REQUIRE(r.stages.size() == 1);
  return validate_stage(r.stages[0], r, reference(), 0.1);
}

}  // namespace

TEST_SUITE("rollout") {

TEST_CASE("duration listing parses into one tool stage") {
  const std::string text = duration_transcript("1800", "1800");
  const Rollout r = parse_rollout(text);
  REQUIRE(r.segments.size() == 4);
  CHECK(r.segments[0].kind == SegmentKind::Reasoning);
  CHECK(r.segments[1].kind == SegmentKind::ToolCall);
  CHECK(r.segments[2].kind == SegmentKind::ToolResult);
  CHECK(r.segments[2].text == "1800");
  CHECK(r.segments[3].kind == SegmentKind::FinalAnswer);
  CHECK(text.substr(r.segments[2].span.begin, 13) == "<tool_result>");
  CHECK(text.substr(r.segments[2].span.end - 14, 14) == "</tool_result>");
  REQUIRE(r.stages.size() == 1);
  CHECK(r.stages[0].index == 1);
  CHECK(r.stages[0].role.key() == "tool:parse_duration#1");
  CHECK(r.stages[0].segments == std::vector<std::size_t>{0, 1, 2});
  CHECK(r.final_segments == std::vector<std::size_t>{3});
  REQUIRE(r.parsed_final);
  CHECK(*r.parsed_final == reference());
  CHECK(r.tool_rounds == 1);
  for (std::size_t i = 1; i < r.segments.size(); ++i) CHECK(r.segments[i - 1].span.end <= r.segments[i].span.begin);
  CHECK(validate_stage(r.stages[0], r, reference(), 0.1).correct);
}

TEST_CASE("final answer only") {
  const Rollout r = parse_rollout(R"({"STL":"altitude>3048.0"})");
  CHECK(r.stages.empty());
  CHECK(r.segments.size() == 1);
  CHECK(r.parsed_final.has_value());
  const Rollout r2 = parse_rollout(std::string(kThink) + answer("1800"));
  CHECK(r2.stages.empty());
  CHECK(r2.final_segments == std::vector<std::size_t>{0, 1});
}

TEST_CASE("parse errors") {
  CHECK(parse_kind("<tool_result>1800</tool_result>" + answer("1800")) == RolloutErrc::UnbalancedTags);
  CHECK(parse_kind("<think>abc" + answer("1800")) == RolloutErrc::UnbalancedTags);
  CHECK(parse_kind("</think>" + answer("1800")) == RolloutErrc::UnbalancedTags);
  CHECK(parse_kind(answer("1800") + "<think>more</think>") == RolloutErrc::UnbalancedTags);
  CHECK(parse_kind("<think>never answered</think>") == RolloutErrc::NoFinalAnswer);
  CHECK(parse_kind("<tool_call>parse_duration(\"1 s\")</tool_call><tool_result>1</tool_result>") ==
        RolloutErrc::NoFinalAnswer);
  CHECK(parse_kind("   ") == RolloutErrc::NoFinalAnswer);
  std::string many;
  for (int i = 0; i < 6; ++i) many += "<tool_call>eval_math_expr(\"1+1\")</tool_call><tool_result>2</tool_result>";
  CHECK(parse_kind(many + answer("2")) == RolloutErrc::TooManyToolRounds);
  CHECK_NOTHROW(parse_rollout(many + answer("2"), 6));
}

TEST_CASE("unparseable final JSON keeps the rollout") {
  const Rollout r = parse_rollout("<answer>{\"STL\": nope}</answer>");
  CHECK_FALSE(r.parsed_final.has_value());
  CHECK_FALSE(r.final_error.empty());
}

TEST_CASE("stage failures") {
  CHECK(only_stage_verdict("<tool_call>lookup_weather(\"Paris\")</tool_call><tool_result>12</tool_result>" +
                           answer("1800"))
            .failure == StageFailure::BadToolName);
  CHECK(only_stage_verdict("<tool_call>parse_duration(5)</tool_call><tool_result>5</tool_result>" +
                           answer("1800"))
            .failure == StageFailure::BadArgs);
  CHECK(only_stage_verdict("<tool_call>parse_duration(\"30 minutes\"</tool_call><tool_result>1800</tool_result>" +
                           answer("1800"))
            .failure == StageFailure::BadArgs);
  CHECK(only_stage_verdict("<tool_call>parse_duration(\"30 fortnights\")</tool_call><tool_result>0</tool_result>" +
                           answer("1800"))
            .failure == StageFailure::ExecFailed);
  CHECK(only_stage_verdict("<tool_call>parse_duration(\"30 minutes\")</tool_call>" + answer("1800")).failure ==
        StageFailure::ExecFailed);
  // Recorded result disagrees with re-execution.
  CHECK(only_stage_verdict(duration_transcript("1900", "1800")).failure == StageFailure::Inconsistent);
  // Result never reaches the formula.
  const StageVerdict unused = only_stage_verdict(duration_transcript("1800", "1900"));
  CHECK_FALSE(unused.correct);
  CHECK(unused.failure == StageFailure::Inconsistent);
  // Within tolerance.
  CHECK(only_stage_verdict(duration_transcript("1800", "1800.05")).correct);
  CHECK(only_stage_verdict(duration_transcript("1800.1", "1800")).correct);
}

TEST_CASE("threshold grounding") {
  const std::string call =
      "<tool_call>convert_unit(10000, \"ft\", \"m\")</tool_call><tool_result>3048.0</tool_result>";
  CHECK(only_stage_verdict(call + answer("1800")).correct);
  CHECK(only_stage_verdict(call + answer("1800", R"("altitude<3048.0")")).failure ==
        StageFailure::BadPredicateGrounding);
  CHECK(only_stage_verdict(call + answer("1800", R"("speed>3048.0")")).failure ==
        StageFailure::BadPredicateGrounding);
  // A convert_unit value that only lands in a time bound is not used.
  CHECK(only_stage_verdict(call + answer("3048", R"("altitude>1.0")")).failure == StageFailure::Inconsistent);
}

TEST_CASE("event grounding") {
  const StlNode ref_edge =
      StlNode::temporal(Op::Finally, {0, 1800}, StlNode::rise(StlNode::atom("altitude>3048.0")));
  const Rollout ok = parse_rollout(answer("1800", R"({"Operation":"Rise","Rightaction":"altitude>3048.0"})"));
  REQUIRE(ok.stages.size() == 1);
  CHECK(ok.stages[0].role.category == StageCategory::EventGrounding);
  CHECK(ok.stages[0].role.key() == "event_grounding#1");
  CHECK(validate_stage(ok.stages[0], ok, ref_edge, 0.1).correct);
  CHECK(validate_stage(ok.stages[0], ok, reference(), 0.1).failure == StageFailure::UnjustifiedEventOp);
  const Rollout fall = parse_rollout(answer("1800", R"({"Operation":"Fall","Rightaction":"altitude>3048.0"})"));
  CHECK(validate_stage(fall.stages[0], fall, ref_edge, 0.1).failure == StageFailure::UnjustifiedEventOp);
}

TEST_CASE("role ordinals") {
  const std::string two =
      "<tool_call>parse_duration(\"10 s\")</tool_call><tool_result>10</tool_result>"
      "<think>next</think><tool_call>parse_duration(\"20 s\")</tool_call><tool_result>20</tool_result>"
      "<tool_call>eval_math_expr(\"2*10\")</tool_call><tool_result>20</tool_result>" +
      answer("20");
  const Rollout r = parse_rollout(two);
  REQUIRE(r.stages.size() == 3);
  CHECK(r.stages[0].role.key() == "tool:parse_duration#1");
  CHECK(r.stages[1].role.key() == "tool:parse_duration#2");
  CHECK(r.stages[2].role.key() == "tool:eval_math_expr#1");
  CHECK(r.stages[1].segments.size() == 3);
  CHECK(r.stages[2].index == 3);
}

TEST_CASE("final answer extraction") {
  CHECK(extract_final_answer("Final: {\"STL\":\"temp>1\"} done") == StlNode::atom("temp>1"));
  CHECK_THROWS(extract_final_answer("no json here"));
}

}  // TEST_SUITE
