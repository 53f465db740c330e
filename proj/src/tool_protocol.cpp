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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "stlforge/ast.hpp"
#include "stlforge/tools.hpp"

namespace stlforge {

using nlohmann::json;

std::string_view tool_name(ToolName t) noexcept {
  switch (t) {
    case ToolName::ParseDuration: return "parse_duration";
    case ToolName::ConvertUnit: return "convert_unit";
    case ToolName::EvalMathExpr: return "eval_math_expr";
    case ToolName::CalcTimeDiff: return "calc_time_diff";
  }
  return "?";
}

std::optional<ToolName> tool_from_name(std::string_view name) {
  for (ToolName t : kAllTools) {
    if (tool_name(t) == name) return t;
  }
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Schema field order, used to bind positional arguments.
std::vector<std::string> positional_fields(std::string_view name, std::size_t count) {
  const auto tool = tool_from_name(name);
  if (!tool) return {};
  switch (*tool) {
    case ToolName::ParseDuration: return {"text"};
    case ToolName::ConvertUnit: return {"value", "from_unit", "to_unit"};
    case ToolName::EvalMathExpr: return {"expression"};
    case ToolName::CalcTimeDiff:
      if (count >= 2) return {"start", "end"};
      return {"text"};
  }
  return {};
}

std::string canonical_key(std::string_view tool, std::string key) {
  static const std::pair<std::string_view, std::string_view> kCommon[] = {
      {"from", "from_unit"},       {"unit_from", "from_unit"},
      {"source_unit", "from_unit"}, {"to", "to_unit"},
      {"unit_to", "to_unit"},      {"target_unit", "to_unit"},
      {"expr", "expression"},      {"start_time", "start"},
      {"end_time", "end"},         {"input", "text"},
  };
  for (const auto& [alias, canonical] : kCommon) {
    if (alias == key) return std::string(canonical);
  }
  if (tool == "parse_duration" && (key == "duration" || key == "expression")) {
    return "text";
  }
  return key;
}

json normalize_args(std::string_view tool, const json& args) {
  json out = json::object();
  for (const auto& [key, value] : args.items()) {
    out[canonical_key(tool, key)] = value;
  }
  return out;
}

// Splits `a, "b, c", d` at top-level commas.
std::vector<std::string_view> split_args(std::string_view inner) {
  std::vector<std::string_view> parts;
  char quote = 0;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const char c = inner[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') quote = c;
    else if (c == '(' || c == '[' || c == '{') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
    else if (c == ',' && depth == 0) {
      parts.push_back(trim(inner.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (quote) throw ToolCallSyntaxError("unterminated string in tool arguments");
  const std::string_view last = trim(inner.substr(start));
  if (!last.empty() || !parts.empty()) parts.push_back(last);
  return parts;
}

json arg_value(std::string_view text) {
  if (text.empty()) throw ToolCallSyntaxError("empty tool argument");
  if (text.front() == '"') {
    try {
      return json::parse(text);
    } catch (const json::exception&) {
      throw ToolCallSyntaxError("bad string literal " + std::string(text));
    }
  }
  if (text.front() == '\'') {
    if (text.size() < 2 || text.back() != '\'') {
      throw ToolCallSyntaxError("bad string literal " + std::string(text));
    }
    return std::string(text.substr(1, text.size() - 2));
  }
  std::string_view num = text;
  if (num.front() == '+') num.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (ec == std::errc{} && end == num.data() + num.size()) return v;
  return std::string(text);  // bare word such as a unit name
}

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Position of '=' in `key=value`, or npos for a positional argument.
std::size_t keyword_split(std::string_view part) {
  if (part.empty() || part.front() == '"' || part.front() == '\'') {
    return std::string_view::npos;
  }
  const std::size_t eq = part.find('=');
  if (eq == std::string_view::npos || eq == 0) return std::string_view::npos;
  const bool name = std::all_of(part.begin(), part.begin() + eq, [](char c) {
    return is_identifier_char(c) || std::isspace(static_cast<unsigned char>(c));
  });
  return name ? eq : std::string_view::npos;
}

}  // namespace

ToolCall parse_tool_call(std::string_view body) {
  const std::string_view text = trim(body);
  if (text.empty()) throw ToolCallSyntaxError("empty tool call");

  if (text.front() == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw ToolCallSyntaxError(std::string("malformed JSON tool call: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string()) {
      throw ToolCallSyntaxError("JSON tool call lacks a string 'name'");
    }
    ToolCall call;
    call.name = doc["name"].get<std::string>();
    json args = json::object();
    for (const char* key : {"arguments", "args", "parameters"}) {
      if (doc.contains(key)) {
        args = doc[key];
        break;
      }
    }
    if (args.is_string()) {
      try {
        args = json::parse(args.get<std::string>());
      } catch (const json::exception&) {
        throw ToolCallSyntaxError("tool arguments string is not JSON");
      }
    }
    if (!args.is_object()) throw ToolCallSyntaxError("tool arguments must be an object");
    call.args = normalize_args(call.name, args);
    return call;
  }

  std::size_t name_end = 0;
  while (name_end < text.size() && is_identifier_char(text[name_end])) ++name_end;
  if (name_end == 0) throw ToolCallSyntaxError("tool call lacks a name");
  const std::size_t open = text.find_first_not_of(" \t", name_end);
  if (open == std::string_view::npos || text[open] != '(' || text.back() != ')') {
    throw ToolCallSyntaxError("expected name(arguments)");
  }

  ToolCall call;
  call.name = std::string(text.substr(0, name_end));
  const std::string_view inner = trim(text.substr(open + 1, text.size() - open - 2));
  if (!inner.empty() && inner.front() == '{') {
    json args;
    try {
      args = json::parse(inner);
    } catch (const json::exception& e) {
      throw ToolCallSyntaxError(std::string("malformed JSON arguments: ") + e.what());
    }
    if (!args.is_object()) throw ToolCallSyntaxError("tool arguments must be an object");
    call.args = normalize_args(call.name, args);
    return call;
  }

  const auto parts = split_args(inner);
  std::size_t positional = 0;
  for (auto part : parts) {
    if (keyword_split(part) == std::string_view::npos) ++positional;
  }
  const auto fields = positional_fields(call.name, positional);
  std::size_t next = 0;
  for (auto part : parts) {
    const std::size_t eq = keyword_split(part);
    if (eq != std::string_view::npos) {
      const std::string key = canonical_key(call.name, std::string(trim(part.substr(0, eq))));
      call.args[key] = arg_value(trim(part.substr(eq + 1)));
      continue;
    }
    const std::string key =
        next < fields.size() ? fields[next] : "arg" + std::to_string(next);
    ++next;
    call.args[key] = arg_value(part);
  }
  return call;
}

namespace {

std::optional<std::string> require_string(const json& args, const char* key) {
  if (!args.contains(key)) return std::string("missing argument '") + key + "'";
  if (!args[key].is_string()) return std::string("argument '") + key + "' must be a string";
  if (trim(args[key].get_ref<const std::string&>()).empty()) {
    return std::string("argument '") + key + "' is empty";
  }
  return std::nullopt;
}

std::optional<std::string> only_keys(const json& args,
                                     std::initializer_list<std::string_view> keys) {
  for (const auto& [key, value] : args.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      return "unexpected argument '" + key + "'";
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_arguments(const ToolCall& call) {
  const auto tool = tool_from_name(call.name);
  if (!tool) return "unknown tool '" + call.name + "'";
  const json& a = call.args;
  if (!a.is_object()) return std::string("arguments must be an object");
  switch (*tool) {
    case ToolName::ParseDuration:
      if (auto e = only_keys(a, {"text"})) return e;
      return require_string(a, "text");
    case ToolName::EvalMathExpr:
      if (auto e = only_keys(a, {"expression"})) return e;
      return require_string(a, "expression");
    case ToolName::ConvertUnit: {
      if (auto e = only_keys(a, {"value", "from_unit", "to_unit"})) return e;
      if (!a.contains("value")) return std::string("missing argument 'value'");
      if (!a["value"].is_number()) return std::string("argument 'value' must be a number");
      for (const char* key : {"from_unit", "to_unit"}) {
        if (auto e = require_string(a, key)) return e;
        if (!is_known_unit(a[key].get<std::string>())) {
          return "unknown unit '" + a[key].get<std::string>() + "'";
        }
      }
      return std::nullopt;
    }
    case ToolName::CalcTimeDiff:
      if (a.contains("text")) {
        if (auto e = only_keys(a, {"text"})) return e;
        return require_string(a, "text");
      }
      if (auto e = only_keys(a, {"start", "end"})) return e;
      if (auto e = require_string(a, "start")) return e;
      return require_string(a, "end");
  }
  return std::nullopt;
}

ToolResult execute(const ToolCall& call) {
  if (auto problem = check_arguments(call)) return ToolResult::failure(*problem);
  const json& a = call.args;
  switch (*tool_from_name(call.name)) {
    case ToolName::ParseDuration: return parse_duration(a["text"].get<std::string>());
    case ToolName::EvalMathExpr: return eval_math_expr(a["expression"].get<std::string>());
    case ToolName::ConvertUnit:
      return convert_unit(a["value"].get<double>(), a["from_unit"].get<std::string>(),
                          a["to_unit"].get<std::string>());
    case ToolName::CalcTimeDiff:
      if (a.contains("text")) return calc_time_diff(a["text"].get<std::string>());
      return calc_time_diff(a["start"].get<std::string>(), a["end"].get<std::string>());
  }
  return ToolResult::failure("unreachable");
}

std::string format_tool_value(ToolName tool, double value) {
  if (tool == ToolName::ConvertUnit) return format_decimal(value);
  if (value == std::floor(value) && std::fabs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  return format_decimal(value);
}

std::optional<double> parse_tool_value(std::string_view body) {
  std::string_view text = trim(body);
  if (!text.empty() && text.front() == '{') {
    try {
      const json doc = json::parse(text);
      for (const char* key : {"value", "result", "output"}) {
        if (doc.contains(key) && doc[key].is_number()) return doc[key].get<double>();
      }
    } catch (const json::exception&) {
    }
    return std::nullopt;
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size() ||
      !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace stlforge
