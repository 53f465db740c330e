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

#include "stlforge/rollout.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

#include "stlforge/matcher.hpp"

namespace stlforge {

std::string_view to_string(SegmentKind kind) noexcept {
  switch (kind) {
    case SegmentKind::Reasoning: return "reasoning";
    case SegmentKind::ToolCall: return "tool_call";
    case SegmentKind::ToolResult: return "tool_result";
    case SegmentKind::FinalAnswer: return "final_answer";
  }
  return "?";
}

std::string_view to_string(StageFailure failure) noexcept {
  switch (failure) {
    case StageFailure::BadToolName: return "BadToolName";
    case StageFailure::BadArgs: return "BadArgs";
    case StageFailure::ExecFailed: return "ExecFailed";
    case StageFailure::Inconsistent: return "Inconsistent";
    case StageFailure::BadPredicateGrounding: return "BadPredicateGrounding";
    case StageFailure::UnjustifiedEventOp: return "UnjustifiedEventOp";
  }
  return "?";
}

std::string_view to_string(RolloutErrc kind) noexcept {
  switch (kind) {
    case RolloutErrc::UnbalancedTags: return "UnbalancedTags";
    case RolloutErrc::NoFinalAnswer: return "NoFinalAnswer";
    case RolloutErrc::TooManyToolRounds: return "TooManyToolRounds";
  }
  return "?";
}

std::string StageRole::key() const {
  if (category == StageCategory::EventGrounding) {
    return "event_grounding#" + std::to_string(ordinal);
  }
  return "tool:" + tool + "#" + std::to_string(ordinal);
}

namespace {

struct TagKind {
  std::string_view name;
  SegmentKind kind;
};

constexpr std::array<TagKind, 4> kTags = {{
    {"think", SegmentKind::Reasoning},
    {"tool_call", SegmentKind::ToolCall},
    {"tool_result", SegmentKind::ToolResult},
    {"answer", SegmentKind::FinalAnswer},
}};

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

struct TagHit {
  std::size_t pos = std::string_view::npos;
  const TagKind* tag = nullptr;
  bool closing = false;
};

TagHit next_tag(std::string_view text, std::size_t from) {
  TagHit best;
  for (const TagKind& t : kTags) {
    const std::string open = "<" + std::string(t.name) + ">";
    const std::string close = "</" + std::string(t.name) + ">";
    if (auto p = text.find(open, from); p < best.pos) best = {p, &t, false};
    if (auto p = text.find(close, from); p < best.pos) best = {p, &t, true};
  }
  return best;
}

[[noreturn]] void unbalanced(const std::string& why) {
  throw RolloutParseError(RolloutErrc::UnbalancedTags, why);
}

void split_segments(std::string_view text, Rollout& r) {
  std::size_t pos = 0;
  auto push_loose = [&](std::size_t begin, std::size_t end) {
    const std::string_view chunk = text.substr(begin, end - begin);
    if (blank(chunk)) return;
    const std::size_t lead = chunk.find_first_not_of(" \t\r\n");
    const std::size_t tail = chunk.find_last_not_of(" \t\r\n");
    r.segments.push_back({SegmentKind::Reasoning, std::string(trim(chunk)),
                          {begin + lead, begin + tail + 1}});
  };

  while (pos < text.size()) {
    const TagHit hit = next_tag(text, pos);
    if (!hit.tag) {
      push_loose(pos, text.size());
      break;
    }
    if (hit.closing) {
      unbalanced("closing </" + std::string(hit.tag->name) + "> without an opening tag");
    }
    if (!r.segments.empty() && r.segments.back().kind == SegmentKind::FinalAnswer) {
      unbalanced("content after the final answer");
    }
    push_loose(pos, hit.pos);

    const std::size_t inner_begin = hit.pos + hit.tag->name.size() + 2;
    const std::string close = "</" + std::string(hit.tag->name) + ">";
    const std::size_t close_pos = text.find(close, inner_begin);
    if (close_pos == std::string_view::npos) {
      unbalanced("<" + std::string(hit.tag->name) + "> is never closed");
    }
    const TagHit nested = next_tag(text, inner_begin);
    if (nested.pos < close_pos) {
      unbalanced("tag nested inside <" + std::string(hit.tag->name) + ">");
    }
    if (hit.tag->kind == SegmentKind::ToolResult &&
        (r.segments.empty() || r.segments.back().kind != SegmentKind::ToolCall)) {
      unbalanced("<tool_result> without a preceding <tool_call>");
    }
    const std::string_view inner = text.substr(inner_begin, close_pos - inner_begin);
    r.segments.push_back({hit.tag->kind, std::string(trim(inner)),
                          {hit.pos, close_pos + close.size()}});
    pos = close_pos + close.size();
  }

  if (r.segments.empty()) {
    throw RolloutParseError(RolloutErrc::NoFinalAnswer, "empty transcript");
  }
  // Untagged trailing text is the answer.
  Segment& last = r.segments.back();
  if (last.kind == SegmentKind::Reasoning) {
    const bool tagged = text.substr(last.span.begin, 7) == "<think>";
    if (tagged) throw RolloutParseError(RolloutErrc::NoFinalAnswer, "transcript ends in <think>");
    last.kind = SegmentKind::FinalAnswer;
  } else if (last.kind != SegmentKind::FinalAnswer) {
    throw RolloutParseError(RolloutErrc::NoFinalAnswer,
                            "transcript ends with " + std::string(to_string(last.kind)));
  }
}

void build_stages(Rollout& r) {
  std::vector<std::size_t> pending;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < r.segments.size(); ++i) {
    const Segment& seg = r.segments[i];
    switch (seg.kind) {
      case SegmentKind::Reasoning: pending.push_back(i); break;
      case SegmentKind::ToolCall: {
        ++r.tool_rounds;
        Stage stage;
        stage.index = r.stages.size() + 1;
        stage.role.category = StageCategory::Tool;
        try {
          stage.role.tool = parse_tool_call(seg.text).name;
        } catch (const ToolCallSyntaxError&) {
          stage.role.tool = "malformed";
        }
        stage.role.ordinal = ++seen[stage.role.tool];
        stage.segments = std::move(pending);
        pending.clear();
        stage.segments.push_back(i);
        stage.call_segment = i;
        r.stages.push_back(std::move(stage));
        break;
      }
      case SegmentKind::ToolResult:
        r.stages.back().segments.push_back(i);
        r.stages.back().result_segment = i;
        break;
      case SegmentKind::FinalAnswer:
        pending.push_back(i);
        r.final_segments = std::move(pending);
        pending.clear();
        break;
    }
  }
}

bool contains_edge(const StlNode& n) {
  if (n.op() == Op::Rise || n.op() == Op::Fall) return true;
  for (const StlNode* c : n.operands()) {
    if (contains_edge(*c)) return true;
  }
  return false;
}

void collect_edges(const StlNode& n, std::vector<const StlNode*>& out) {
  if (n.op() == Op::Rise || n.op() == Op::Fall) out.push_back(&n);
  for (const StlNode* c : n.operands()) collect_edges(*c, out);
}

bool near(double a, double b, double tol) { return within_tolerance(a, b, tol); }

bool any_near(const std::vector<double>& values, double v, double raw, double tol) {
  return std::any_of(values.begin(), values.end(), [&](double x) {
    return near(x, v, tol) || near(x, raw, tol);
  });
}

StageVerdict validate_event_stage(const Rollout& rollout, const StlNode& reference,
                                  double tol) {
  if (!rollout.parsed_final) return StageVerdict::pass();
  std::vector<const StlNode*> predicted;
  std::vector<const StlNode*> annotated;
  collect_edges(*rollout.parsed_final, predicted);
  collect_edges(reference, annotated);
  for (const StlNode* e : predicted) {
    const Predicate& p = *e->right()->predicate();
    const bool justified = std::any_of(annotated.begin(), annotated.end(), [&](const StlNode* r) {
      const Predicate& q = *r->right()->predicate();
      return r->op() == e->op() && q.signal == p.signal && q.comparator == p.comparator &&
             near(q.threshold, p.threshold, tol);
    });
    if (!justified) {
      return StageVerdict::fail(StageFailure::UnjustifiedEventOp,
                                std::string(op_name(e->op())) + "(" + format_predicate(p) +
                                    ") has no annotated transition in the reference");
    }
  }
  return StageVerdict::pass();
}

}  // namespace

StlNode extract_final_answer(std::string_view text) {
  std::string_view body = trim(text);
  const std::size_t open = body.find('{');
  const std::size_t close = body.rfind('}');
  if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
    body = body.substr(open, close - open + 1);
  }
  return parse_stl_json(body);
}

Rollout parse_rollout(std::string_view transcript, std::size_t max_tool_rounds) {
  Rollout r;
  split_segments(transcript, r);
  build_stages(r);
  if (r.tool_rounds > max_tool_rounds) {
    throw RolloutParseError(RolloutErrc::TooManyToolRounds,
                            std::to_string(r.tool_rounds) + " tool rounds exceed the limit of " +
                                std::to_string(max_tool_rounds));
  }
  try {
    r.parsed_final = extract_final_answer(r.segments.back().text);
  } catch (const SchemaError& e) {
    r.final_error = std::string(to_string(e.kind())) + ": " + e.what();
  }
  if (r.parsed_final && contains_edge(*r.parsed_final)) {
    Stage event;
    event.index = r.stages.size() + 1;
    event.role = StageRole{StageCategory::EventGrounding, "", 1};
    r.stages.push_back(std::move(event));
  }
  return r;
}

StageVerdict validate_stage(const Stage& stage, const Rollout& rollout,
                            const StlNode& reference, double tolerance) {
  if (stage.role.category == StageCategory::EventGrounding) {
    return validate_event_stage(rollout, reference, tolerance);
  }

  const std::string& call_text = rollout.segments.at(*stage.call_segment).text;
  ToolCall call;
  try {
    call = parse_tool_call(call_text);
  } catch (const ToolCallSyntaxError& e) {
    const bool named = std::any_of(kAllTools.begin(), kAllTools.end(), [&](ToolName t) {
      return trim(call_text).substr(0, tool_name(t).size()) == tool_name(t);
    });
    return StageVerdict::fail(named ? StageFailure::BadArgs : StageFailure::BadToolName,
                              e.what());
  }
  const auto tool = tool_from_name(call.name);
  if (!tool) {
    return StageVerdict::fail(StageFailure::BadToolName, "'" + call.name + "' is not a tool");
  }
  if (auto problem = check_arguments(call)) {
    return StageVerdict::fail(StageFailure::BadArgs, *problem);
  }
  const ToolResult result = execute(call);
  if (!result.ok) return StageVerdict::fail(StageFailure::ExecFailed, *result.error_detail);
  if (!stage.result_segment) {
    return StageVerdict::fail(StageFailure::ExecFailed, "tool call has no <tool_result>");
  }
  const auto recorded = parse_tool_value(rollout.segments.at(*stage.result_segment).text);
  if (!recorded) {
    return StageVerdict::fail(StageFailure::ExecFailed, "tool result is not a number");
  }
  if (!near(*recorded, result.value, tolerance) && !near(*recorded, result.raw_value, tolerance)) {
    return StageVerdict::fail(StageFailure::Inconsistent,
                              "recorded result " + format_decimal(*recorded) +
                                  " differs from re-execution " + format_decimal(result.value));
  }

  if (!rollout.parsed_final) {
    return StageVerdict::fail(StageFailure::Inconsistent,
                              "final answer does not parse, value is never used");
  }
  const NumericFields fields = collect_numeric_fields(*rollout.parsed_final);
  const double v = result.value;
  const double raw = result.raw_value;
  const bool in_time = any_near(fields.time_bounds, v, raw, tolerance);
  const bool in_threshold = any_near(fields.thresholds, v, raw, tolerance);
  bool used = false;
  switch (*tool) {
    case ToolName::ParseDuration:
    case ToolName::CalcTimeDiff: used = in_time; break;
    case ToolName::ConvertUnit: used = in_threshold; break;
    case ToolName::EvalMathExpr: used = in_time || in_threshold; break;
  }
  if (!used) {
    return StageVerdict::fail(StageFailure::Inconsistent,
                              "value " + format_tool_value(*tool, v) +
                                  " does not appear in the matching formula field");
  }

  if (in_threshold && !in_time) {
    const auto refs = collect_predicates(reference);
    bool grounded = false;
    for (const Predicate& p : collect_predicates(*rollout.parsed_final)) {
      if (!near(p.threshold, v, tolerance) && !near(p.threshold, raw, tolerance)) continue;
      grounded = grounded || std::any_of(refs.begin(), refs.end(), [&](const Predicate& q) {
                   return q.signal == p.signal && q.comparator == p.comparator &&
                          near(q.threshold, p.threshold, tolerance);
                 });
    }
    if (!grounded) {
      return StageVerdict::fail(StageFailure::BadPredicateGrounding,
                                "no reference predicate uses value " +
                                    format_tool_value(*tool, v) +
                                    " with the same signal and comparator");
    }
  }
  return StageVerdict::pass();
}

void validate_stages(Rollout& rollout, const StlNode& reference, double tolerance) {
  for (Stage& s : rollout.stages) {
    s.verdict = validate_stage(s, rollout, reference, tolerance);
  }
}

}  // namespace stlforge
