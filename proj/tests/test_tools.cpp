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

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "stlforge/tools.hpp"

using namespace stlforge;

namespace {

double ok_value(const ToolResult& r) {
  REQUIRE_MESSAGE(r.ok, (r.error_detail ? *r.error_detail : std::string()));
  CHECK_FALSE(r.error_detail.has_value());
  return r.value;
}

void check_failure(const ToolResult& r) {
  CHECK_FALSE(r.ok);
  CHECK(r.error_detail.has_value());
}

}  // namespace

TEST_SUITE("tools") {

TEST_CASE("parse_duration") {
  CHECK(ok_value(parse_duration("30 minutes")) == 1800.0);
  CHECK(ok_value(parse_duration("0 seconds")) == 0.0);
  CHECK(ok_value(parse_duration("half an hour")) == 1800.0);
  CHECK(ok_value(parse_duration("1 hour and 15 minutes")) == 3600.0 + 900.0);
  CHECK(ok_value(parse_duration("2 days")) == 2 * 86400.0);
  CHECK(ok_value(parse_duration("1.5 h")) == 5400.0);
  CHECK(ok_value(parse_duration("90 sec")) == 90.0);
  check_failure(parse_duration("30 fortnights"));
  check_failure(parse_duration("minutes"));
  check_failure(parse_duration(""));
}

TEST_CASE("parse_duration is additive over 'and'") {
  const std::vector<std::string> phrases = {"30 minutes", "half an hour", "2 h", "15 s",
                                            "1 day",      "45 min",       "3 hours", "a minute"};
  for (const auto& a : phrases) {
    for (const auto& b : phrases) {
      CHECK(ok_value(parse_duration(a + " and " + b)) ==
            ok_value(parse_duration(a)) + ok_value(parse_duration(b)));
    }
  }
}

TEST_CASE("convert_unit") {
  CHECK(ok_value(convert_unit(10000, "ft", "m")) == 3048.0);
  const ToolResult kn = convert_unit(200, "kn", "m/s");
  CHECK(ok_value(kn) == 102.89);
  CHECK(kn.raw_value == doctest::Approx(200 * 0.514444).epsilon(1e-15));
  CHECK(ok_value(convert_unit(36, "km/h", "m/s")) == 10.0);
  CHECK(ok_value(convert_unit(212, "F", "C")) == 100.0);
  CHECK(ok_value(convert_unit(2, "bar", "kPa")) == 200.0);
  CHECK(ok_value(convert_unit(1, "psi", "kPa")) == 6.89);
  CHECK(ok_value(convert_unit(250, "mm", "m")) == 0.25);
  check_failure(convert_unit(1, "ft", "kPa"));
  check_failure(convert_unit(1, "parsec", "m"));
}

TEST_CASE("convert_unit identity and round trip") {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"ft", "m"},  {"kn", "m/s"}, {"km/h", "m/s"}, {"mph", "m/s"}, {"psi", "kPa"},
      {"bar", "kPa"}, {"F", "C"},  {"mm", "m"},     {"cm", "m"}};
  oracle::Rng rng(4);
  for (const auto& [a, b] : pairs) {
    for (int i = 0; i < 50; ++i) {
      const double x = rng.real(-1e4, 1e4);
      CHECK(convert_unit(x, a, a).raw_value == x);
      const double there = convert_unit(x, a, b).raw_value;
      const double back = convert_unit(there, b, a).raw_value;
      CHECK(std::fabs(back - x) <= 1e-9 * std::max(1.0, std::fabs(x)));
    }
  }
}

TEST_CASE("eval_math_expr") {
  CHECK(ok_value(eval_math_expr("2*900")) == 1800.0);
  CHECK(ok_value(eval_math_expr("0+0")) == 0.0);
  CHECK(ok_value(eval_math_expr("(3+4)*2-1/4")) == 13.75);
  CHECK(ok_value(eval_math_expr("-(2+3)*-2")) == 10.0);
  CHECK(ok_value(eval_math_expr("1.5e2 / 3")) == 50.0);
  check_failure(eval_math_expr("1/0"));
  check_failure(eval_math_expr("2*"));
  check_failure(eval_math_expr("(1+2"));
  check_failure(eval_math_expr("sqrt(4)"));
  check_failure(eval_math_expr("x+1"));
  check_failure(eval_math_expr(""));
}

TEST_CASE("eval_math_expr agrees with a tree evaluator") {
  oracle::Rng rng(1000);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto e = oracle::random_expr(rng, 5);
    const std::string text = oracle::render(*e);
    bool div_zero = false;
    const double expected = oracle::evaluate(*e, div_zero);
    const ToolResult r = eval_math_expr(text);
    if (div_zero || !std::isfinite(expected)) {
      CHECK_MESSAGE(!r.ok, text);
      continue;
    }
    REQUIRE_MESSAGE(r.ok, text);
    CHECK_MESSAGE(r.value == (expected == 0.0 ? 0.0 : expected), text);
    ++compared;
  }
  CHECK(compared > 700);
}

TEST_CASE("calc_time_diff") {
  CHECK(ok_value(calc_time_diff("time interval between 2025-08-01 8:00:00 and 2025-08-01 8:15:00")) == 900.0);
  CHECK(ok_value(calc_time_diff("2025-08-01 08:00:00 and 2025-08-01 08:00:00")) == 0.0);
  CHECK(ok_value(calc_time_diff("between 2025-08-01 23:50:00 and 2025-08-02 00:10:00")) == 1200.0);
  CHECK(ok_value(calc_time_diff("from 10:00:00 to 10:30:00")) == 1800.0);
  CHECK(ok_value(calc_time_diff("2024-02-28 12:00:00", "2024-03-01 12:00:00")) == 2 * 86400.0);
  check_failure(calc_time_diff("only 10:00:00 here"));
  check_failure(calc_time_diff("from 10:30:00 to 10:00:00"));
  check_failure(calc_time_diff("2025-02-30 10:00:00 and 2025-03-01 10:00:00"));
}

TEST_CASE("determinism") {
  for (int i = 0; i < 3; ++i) {
    CHECK(convert_unit(123.456, "mph", "m/s").raw_value == convert_unit(123.456, "mph", "m/s").raw_value);
    CHECK(eval_math_expr("1/3+1/7").value == eval_math_expr("1/3+1/7").value);
  }
}

TEST_CASE("tool call wire forms") {
  const ToolCall a = parse_tool_call(R"(parse_duration("30 minutes"))");
  CHECK(a.name == "parse_duration");
  CHECK(a.args["text"] == "30 minutes");
  CHECK(execute(a).value == 1800.0);

  const ToolCall b = parse_tool_call("convert_unit(10000, 'ft', m)");
  CHECK(b.args["value"] == 10000.0);
  CHECK(b.args["from_unit"] == "ft");
  CHECK(b.args["to_unit"] == "m");
  CHECK(execute(b).value == 3048.0);

  const ToolCall c = parse_tool_call(R"({"name":"eval_math_expr","arguments":{"expression":"2*900"}})");
  CHECK(execute(c).value == 1800.0);
  const ToolCall d = parse_tool_call(R"(calc_time_diff(start="08:00:00", end="08:15:00"))");
  CHECK(execute(d).value == 900.0);
  const ToolCall e = parse_tool_call(R"(eval_math_expr({"expr": "1+1"}))");
  CHECK(execute(e).value == 2.0);

  CHECK_THROWS_AS(parse_tool_call("parse_duration(\"30 minutes\""), ToolCallSyntaxError);
  CHECK_THROWS_AS(parse_tool_call("(1)"), ToolCallSyntaxError);
  CHECK_THROWS_AS(parse_tool_call("{\"args\":{}}"), ToolCallSyntaxError);

  CHECK(check_arguments(parse_tool_call("lookup_weather(\"Paris\")")).has_value());
  CHECK(check_arguments(parse_tool_call("convert_unit(1, ft)")).has_value());
  CHECK(check_arguments(parse_tool_call("parse_duration(5)")).has_value());
  CHECK_FALSE(check_arguments(a).has_value());
}

TEST_CASE("tool values on the wire") {
  CHECK(format_tool_value(ToolName::ParseDuration, 1800) == "1800");
  CHECK(format_tool_value(ToolName::ConvertUnit, 3048) == "3048.0");
  CHECK(format_tool_value(ToolName::ConvertUnit, 102.89) == "102.89");
  CHECK(parse_tool_value(" 1800\n") == 1800.0);
  CHECK(parse_tool_value(R"({"value": 3.5})") == 3.5);
  CHECK_FALSE(parse_tool_value("n/a").has_value());
  CHECK(round_to_cents(102.8888) == 102.89);
  CHECK(round_to_cents(-1.005) == -round_to_cents(1.005));
}

}  // TEST_SUITE
