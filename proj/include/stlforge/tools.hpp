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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace stlforge {

/// Outcome of a tool invocation. `value` is what the harness reports (2
/// decimals for unit conversion); `raw_value` is the unrounded result.
struct ToolResult {
  double value = 0.0;
  double raw_value = 0.0;
  bool ok = false;
  std::optional<std::string> error_detail;

  static ToolResult success(double value, double raw);
  static ToolResult success(double value) { return success(value, value); }
  static ToolResult failure(std::string detail);
};

/// "30 minutes", "half an hour", "1 hour and 15 minutes" -> seconds.
ToolResult parse_duration(std::string_view text);

/// Table-driven conversion between units of the same dimension. The
/// reported value is rounded half-up to 2 decimals.
ToolResult convert_unit(double value, std::string_view from_unit,
                        std::string_view to_unit);

/// + - * / with parentheses and unary minus; nothing else.
ToolResult eval_math_expr(std::string_view expression);

/// Seconds between the first two timestamps found in `text`
/// (`YYYY-MM-DD H:MM:SS` or bare `H:MM:SS`, the latter taking the date of
/// the other timestamp).
ToolResult calc_time_diff(std::string_view text);
ToolResult calc_time_diff(std::string_view start, std::string_view end);

/// Whether `unit` names an entry in the conversion table.
bool is_known_unit(std::string_view unit);

/// Half-up rounding to 2 decimals, as applied at the protocol boundary.
double round_to_cents(double value);

// ---------------------------------------------------------------------------
// Tool-call protocol

enum class ToolName { ParseDuration, ConvertUnit, EvalMathExpr, CalcTimeDiff };

inline constexpr std::array<ToolName, 4> kAllTools = {
    ToolName::ParseDuration, ToolName::ConvertUnit, ToolName::EvalMathExpr,
    ToolName::CalcTimeDiff};

inline constexpr std::size_t kMaxToolRounds = 5;

std::string_view tool_name(ToolName t) noexcept;
std::optional<ToolName> tool_from_name(std::string_view name);

/// A call as written by the model. `name` is kept verbatim so that unknown
/// tools can be reported; `args` is a JSON object keyed by schema field.
struct ToolCall {
  std::string name;
  nlohmann::json args = nlohmann::json::object();
};

/// Thrown when a `<tool_call>` body cannot be read as a call at all.
class ToolCallSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts `name(arg, ...)` with positional or `key=value` arguments, a
/// single JSON object argument, or `{"name": ..., "arguments": {...}}`.
/// Positional arguments are bound to the tool's schema fields in order.
ToolCall parse_tool_call(std::string_view body);

/// Schema check; returns a description of the first problem, if any.
std::optional<std::string> check_arguments(const ToolCall& call);

/// Runs a call. Unknown tools and schema violations yield ok=false.
ToolResult execute(const ToolCall& call);

/// Text the harness puts inside `<tool_result>`: unit conversions always
/// carry a decimal point ("3048.0", "102.89"), time tools print integral
/// values without one ("1800").
std::string format_tool_value(ToolName tool, double value);

/// Reads the numeric content of a `<tool_result>` body.
std::optional<double> parse_tool_value(std::string_view body);

}  // namespace stlforge
