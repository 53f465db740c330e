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

#include "stlforge/tools.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <regex>
#include <vector>

namespace stlforge {

ToolResult ToolResult::success(double value, double raw) {
  return ToolResult{value, raw, true, std::nullopt};
}

ToolResult ToolResult::failure(std::string detail) {
  return ToolResult{0.0, 0.0, false, std::move(detail)};
}

double round_to_cents(double value) {
  // Half-up on the magnitude, so -1.005 and 1.005 round symmetrically.
  const double r = std::floor(std::fabs(value) * 100.0 + 0.5) / 100.0;
  if (r == 0.0) return 0.0;
  return value < 0 ? -r : r;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Leading unsigned decimal number; advances `s` past it.
std::optional<double> take_number(std::string_view& s) {
  std::size_t n = 0;
  bool digits = false;
  while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) ++n, digits = true;
  if (n < s.size() && s[n] == '.') {
    ++n;
    while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) ++n, digits = true;
  }
  if (!digits) return std::nullopt;
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + n, v);
  if (ec != std::errc{} || end != s.data() + n) return std::nullopt;
  s.remove_prefix(n);
  return v;
}

// ---------------------------------------------------------------------------
// Durations

std::optional<double> seconds_per(std::string_view unit) {
  static const std::pair<std::string_view, double> kUnits[] = {
      {"s", 1},         {"sec", 1},        {"secs", 1},      {"second", 1},
      {"seconds", 1},   {"min", 60},       {"mins", 60},     {"minute", 60},
      {"minutes", 60},  {"h", 3600},       {"hr", 3600},     {"hrs", 3600},
      {"hour", 3600},   {"hours", 3600},   {"d", 86400},     {"day", 86400},
      {"days", 86400},
  };
  for (const auto& [name, factor] : kUnits) {
    if (name == unit) return factor;
  }
  return std::nullopt;
}

ToolResult duration_phrase(std::string_view phrase) {
  std::string_view rest = trim(phrase);
  double count = 0.0;
  auto word_is = [&](std::string_view w) {
    if (rest.substr(0, w.size()) != w) return false;
    return rest.size() == w.size() ||
           std::isspace(static_cast<unsigned char>(rest[w.size()]));
  };
  if (word_is("half")) {
    rest = trim(rest.substr(4));
    if (word_is("an")) rest = trim(rest.substr(2));
    else if (word_is("a")) rest = trim(rest.substr(1));
    count = 0.5;
  } else if (word_is("an")) {
    rest = trim(rest.substr(2));
    count = 1.0;
  } else if (word_is("a")) {
    rest = trim(rest.substr(1));
    count = 1.0;
  } else if (auto n = take_number(rest)) {
    count = *n;
    rest = trim(rest);
  } else {
    return ToolResult::failure("no numeric quantity in '" + std::string(phrase) + "'");
  }
  if (rest.empty()) {
    return ToolResult::failure("missing time unit in '" + std::string(phrase) + "'");
  }
  const auto factor = seconds_per(rest);
  if (!factor) {
    return ToolResult::failure("unrecognized time unit '" + std::string(rest) + "'");
  }
  return ToolResult::success(count * *factor);
}

}  // namespace

ToolResult parse_duration(std::string_view text) {
  const std::string lowered = lower(trim(text));
  if (lowered.empty()) return ToolResult::failure("empty duration");
  // Phrases are joined by "and" or commas.
  static const std::regex kJoin(R"(\s*,\s*(?:and\s+)?|\s+and\s+)");
  double total = 0.0;
  std::sregex_token_iterator it(lowered.begin(), lowered.end(), kJoin, -1);
  for (; it != std::sregex_token_iterator(); ++it) {
    const ToolResult part = duration_phrase(it->str());
    if (!part.ok) return part;
    total += part.value;
  }
  return ToolResult::success(total);
}

// ---------------------------------------------------------------------------
// Unit conversion

namespace {

enum class Dimension { Length, Speed, Pressure, Temperature, Time, Angle };

// base = (value + shift) * scale
struct UnitDef {
  std::string_view canonical;
  Dimension dim;
  double scale;
  double shift;
};

struct UnitAlias {
  std::string_view spelling;  // lower-case
  UnitDef def;
};

constexpr double kPi = 3.14159265358979323846;

const std::vector<UnitAlias>& unit_table() {
  static const std::vector<UnitAlias> table = [] {
    const UnitDef m{"m", Dimension::Length, 1.0, 0.0};
    const UnitDef ft{"ft", Dimension::Length, 0.3048, 0.0};
    const UnitDef mm{"mm", Dimension::Length, 0.001, 0.0};
    const UnitDef cm{"cm", Dimension::Length, 0.01, 0.0};
    const UnitDef km{"km", Dimension::Length, 1000.0, 0.0};
    const UnitDef in{"in", Dimension::Length, 0.0254, 0.0};
    const UnitDef mi{"mi", Dimension::Length, 1609.344, 0.0};
    const UnitDef mps{"m/s", Dimension::Speed, 1.0, 0.0};
    const UnitDef kn{"kn", Dimension::Speed, 0.514444, 0.0};
    const UnitDef kmh{"km/h", Dimension::Speed, 1.0 / 3.6, 0.0};
    const UnitDef mph{"mph", Dimension::Speed, 0.44704, 0.0};
    const UnitDef fps{"ft/s", Dimension::Speed, 0.3048, 0.0};
    const UnitDef kpa{"kPa", Dimension::Pressure, 1.0, 0.0};
    const UnitDef pa{"Pa", Dimension::Pressure, 0.001, 0.0};
    const UnitDef hpa{"hPa", Dimension::Pressure, 0.1, 0.0};
    const UnitDef mpa{"MPa", Dimension::Pressure, 1000.0, 0.0};
    const UnitDef psi{"psi", Dimension::Pressure, 6.894757, 0.0};
    const UnitDef bar{"bar", Dimension::Pressure, 100.0, 0.0};
    const UnitDef atm{"atm", Dimension::Pressure, 101.325, 0.0};
    const UnitDef degc{"C", Dimension::Temperature, 1.0, 0.0};
    const UnitDef degf{"F", Dimension::Temperature, 5.0 / 9.0, -32.0};
    const UnitDef kelvin{"K", Dimension::Temperature, 1.0, -273.15};
    const UnitDef sec{"s", Dimension::Time, 1.0, 0.0};
    const UnitDef ms{"ms", Dimension::Time, 0.001, 0.0};
    const UnitDef minute{"min", Dimension::Time, 60.0, 0.0};
    const UnitDef hour{"h", Dimension::Time, 3600.0, 0.0};
    const UnitDef rad{"rad", Dimension::Angle, 1.0, 0.0};
    const UnitDef deg{"deg", Dimension::Angle, kPi / 180.0, 0.0};
    return std::vector<UnitAlias>{
        {"m", m},           {"meter", m},        {"meters", m},
        {"metre", m},       {"metres", m},       {"ft", ft},
        {"feet", ft},       {"foot", ft},        {"mm", mm},
        {"cm", cm},         {"km", km},          {"in", in},
        {"inch", in},       {"inches", in},      {"mi", mi},
        {"mile", mi},       {"miles", mi},       {"m/s", mps},
        {"mps", mps},       {"kn", kn},          {"kt", kn},
        {"kts", kn},        {"knot", kn},        {"knots", kn},
        {"km/h", kmh},      {"kmh", kmh},        {"kph", kmh},
        {"mph", mph},       {"ft/s", fps},       {"fps", fps},
        {"kpa", kpa},       {"pa", pa},          {"hpa", hpa},
        {"mpa", mpa},       {"psi", psi},        {"bar", bar},
        {"atm", atm},       {"c", degc},         {"°c", degc},
        {"degc", degc},     {"celsius", degc},   {"f", degf},
        {"°f", degf},  {"degf", degf},      {"fahrenheit", degf},
        {"k", kelvin},      {"kelvin", kelvin},  {"s", sec},
        {"sec", sec},       {"second", sec},     {"seconds", sec},
        {"ms", ms},         {"min", minute},     {"minute", minute},
        {"minutes", minute}, {"h", hour},        {"hr", hour},
        {"hour", hour},     {"hours", hour},     {"rad", rad},
        {"deg", deg},       {"degree", deg},     {"degrees", deg},
    };
  }();
  return table;
}

std::optional<UnitDef> find_unit(std::string_view unit) {
  const std::string key = lower(trim(unit));
  for (const auto& alias : unit_table()) {
    if (alias.spelling == key) return alias.def;
  }
  return std::nullopt;
}

}  // namespace

bool is_known_unit(std::string_view unit) { return find_unit(unit).has_value(); }

ToolResult convert_unit(double value, std::string_view from_unit,
                        std::string_view to_unit) {
  const auto from = find_unit(from_unit);
  const auto to = find_unit(to_unit);
  if (!from) return ToolResult::failure("unknown unit '" + std::string(from_unit) + "'");
  if (!to) return ToolResult::failure("unknown unit '" + std::string(to_unit) + "'");
  if (from->dim != to->dim) {
    return ToolResult::failure("cannot convert " + std::string(from->canonical) +
                               " to " + std::string(to->canonical));
  }
  if (!std::isfinite(value)) return ToolResult::failure("value is not finite");
  double raw = value;
  if (from->canonical != to->canonical) {
    const double base = (value + from->shift) * from->scale;
    raw = base / to->scale - to->shift;
  }
  return ToolResult::success(round_to_cents(raw), raw);
}

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

  struct Error {
    std::string message;
  };

 private:
  static constexpr int kMaxDepth = 200;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error{msg + " at position " + std::to_string(pos_)};
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expr() {
    double v = term();
    while (true) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = unary();
    while (true) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const double d = unary();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (++depth_ > kMaxDepth) fail("expression nested too deeply");
    double v = 0.0;
    if (eat('-')) v = -unary();
    else if (eat('+')) v = unary();
    else v = primary();
    --depth_;
    return v;
  }

  double primary() {
    if (eat('(')) {
      const double v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    skip_space();
    auto digit = [&](std::size_t i) {
      return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
    };
    std::size_t end = pos_;
    bool any = false;
    while (digit(end)) ++end, any = true;
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      while (digit(end)) ++end, any = true;
    }
    if (!any) {
      fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'"
                               : std::string("unexpected end of expression"));
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
      if (!digit(e)) fail("malformed exponent");
      while (digit(e)) ++e;
      end = e;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, v);
    if (ec != std::errc{} || ptr != text_.data() + end) fail("number out of range");
    pos_ = end;
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

ToolResult eval_math_expr(std::string_view expression) {
  if (trim(expression).empty()) return ToolResult::failure("empty expression");
  try {
    const double v = ExprParser(expression).parse();
    if (!std::isfinite(v)) return ToolResult::failure("result is not finite");
    return ToolResult::success(v == 0.0 ? 0.0 : v);
  } catch (const ExprParser::Error& e) {
    return ToolResult::failure(e.message);
  }
}

// ---------------------------------------------------------------------------
// Timestamps

namespace {

struct Timestamp {
  std::optional<std::chrono::sys_days> date;
  long seconds_of_day = 0;
};

const std::regex& timestamp_pattern() {
  static const std::regex re(
      R"((?:(\d{4})-(\d{1,2})-(\d{1,2})[ T]+)?(\d{1,2}):(\d{2})(?::(\d{2}))?)");
  return re;
}

std::optional<Timestamp> to_timestamp(const std::smatch& m, std::string& error) {
  Timestamp ts;
  if (m[1].matched) {
    using namespace std::chrono;
    const year_month_day ymd{year{std::stoi(m[1].str())},
                             month{static_cast<unsigned>(std::stoi(m[2].str()))},
                             day{static_cast<unsigned>(std::stoi(m[3].str()))}};
    if (!ymd.ok()) {
      error = "invalid date '" + m[1].str() + "-" + m[2].str() + "-" + m[3].str() + "'";
      return std::nullopt;
    }
    ts.date = sys_days{ymd};
  }
  const long h = std::stol(m[4].str());
  const long mi = std::stol(m[5].str());
  const long s = m[6].matched ? std::stol(m[6].str()) : 0;
  if (h > 23 || mi > 59 || s > 59) {
    error = "invalid time of day '" + m.str() + "'";
    return std::nullopt;
  }
  ts.seconds_of_day = h * 3600 + mi * 60 + s;
  return ts;
}

ToolResult diff(Timestamp a, Timestamp b) {
  // A date-less timestamp takes the date of the other one.
  if (a.date && !b.date) b.date = a.date;
  if (b.date && !a.date) a.date = b.date;
  long day_delta = 0;
  if (a.date) day_delta = (*b.date - *a.date).count();
  const double delta =
      static_cast<double>(day_delta) * 86400.0 +
      static_cast<double>(b.seconds_of_day - a.seconds_of_day);
  if (delta < 0) {
    return ToolResult::failure("end precedes start by " +
                               std::to_string(static_cast<long>(-delta)) + " s");
  }
  return ToolResult::success(delta);
}

std::optional<Timestamp> single_timestamp(std::string_view text, std::string& error) {
  const std::string s(trim(text));
  std::smatch m;
  if (!std::regex_match(s, m, timestamp_pattern())) {
    error = "cannot read timestamp '" + s + "'";
    return std::nullopt;
  }
  return to_timestamp(m, error);
}

}  // namespace

ToolResult calc_time_diff(std::string_view text) {
  const std::string s(text);
  std::vector<Timestamp> found;
  std::string error;
  for (std::sregex_iterator it(s.begin(), s.end(), timestamp_pattern()), end;
       it != end && found.size() < 2; ++it) {
    auto ts = to_timestamp(*it, error);
    if (!ts) return ToolResult::failure(error);
    found.push_back(*ts);
  }
  if (found.size() < 2) {
    return ToolResult::failure("expected two timestamps, found " +
                               std::to_string(found.size()));
  }
  return diff(found[0], found[1]);
}

ToolResult calc_time_diff(std::string_view start, std::string_view end) {
  std::string error;
  const auto a = single_timestamp(start, error);
  if (!a) return ToolResult::failure(error);
  const auto b = single_timestamp(end, error);
  if (!b) return ToolResult::failure(error);
  return diff(*a, *b);
}

}  // namespace stlforge
