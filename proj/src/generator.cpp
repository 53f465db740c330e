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

// Template-driven sample generation. The reference tree is drawn first as a
// mutable draft, tool annotations then rewrite some of its numbers, and only
// the finished draft is rendered to text.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "stlforge/bench.hpp"
#include "stlforge/vocabulary.hpp"

namespace stlforge {

namespace {

constexpr std::array<std::pair<int, int>, 6> kPredicateRange = {
    {{1, 1}, {2, 3}, {3, 5}, {4, 6}, {5, 7}, {6, 8}}};

constexpr int kMaxOps = 6;
constexpr int kMaxPreds = 8;

struct Draft {
  Op op = Op::Atom;
  Interval time;
  std::vector<Draft> kids;
  Predicate pred;
  std::string hi_en, hi_zh;  // surface form of time.hi when a tool supplied it
  std::string value_en;      // surface form of the threshold when converted
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool chance(double p) { return unit() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Shape: exactly `ops` operator nodes over exactly `preds` atoms.

class ShapePlanner {
 public:
  explicit ShapePlanner(const TemplateSpec& spec) {
    for (Op op : spec.operators) {
      if (is_unary_temporal(op) || op == Op::Not) unary_.push_back(op);
      if (is_binary_temporal(op) || op == Op::Imply) binary_.push_back(op);
      if (is_nary(op)) nary_.push_back(op);
      if ((op == Op::Rise || op == Op::Fall) && spec.allow_edges) edges_.push_back(op);
    }
    for (Op op : spec.operators) {
      if (is_temporal(op)) temporal_.push_back(op);
    }
    for (int o = 0; o <= kMaxOps; ++o) {
      for (int p = 0; p <= kMaxPreds; ++p) {
        for (int k = 1; k <= kMaxPreds; ++k) multi_[o][p][k] = -1;
        feasible_[o][p] = -1;
      }
    }
  }

  bool feasible(int o, int p) {
    if (o < 0 || p < 1 || o > kMaxOps || p > kMaxPreds) return false;
    int& memo = feasible_[o][p];
    if (memo >= 0) return memo;
    bool ok = false;
    if (o == 0) {
      ok = p == 1;
    } else {
      ok = (!unary_.empty() && feasible(o - 1, p)) || (!edges_.empty() && o == 1 && p == 1) ||
           (!binary_.empty() && multi(o - 1, p, 2));
      for (int k = 2; !ok && k <= p && !nary_.empty(); ++k) ok = multi(o - 1, p, k);
    }
    memo = ok;
    return ok;
  }

  // Can (o, p) be split into k feasible children?
  bool multi(int o, int p, int k) {
    if (o < 0 || p < k || k < 1) return false;
    if (k == 1) return feasible(o, p);
    int& memo = multi_[o][p][k];
    if (memo >= 0) return memo;
    bool ok = false;
    for (int o1 = 0; o1 <= o && !ok; ++o1) {
      for (int p1 = 1; p1 <= p - k + 1 && !ok; ++p1) {
        ok = feasible(o1, p1) && multi(o - o1, p - p1, k - 1);
      }
    }
    memo = ok;
    return ok;
  }

  struct Choice {
    Op op;
    int k;  // children
  };

  // Uniform over the operators that keep the budget satisfiable. The root
  // prefers a temporal operator when one fits.
  Choice choose(int o, int p, bool root, Rng& rng) {
    std::vector<Choice> options;
    if (!unary_.empty() && feasible(o - 1, p)) {
      for (Op op : unary_) options.push_back({op, 1});
    }
    if (o == 1 && p == 1) {
      for (Op op : edges_) options.push_back({op, 1});
    }
    if (multi(o - 1, p, 2)) {
      for (Op op : binary_) options.push_back({op, 2});
    }
    for (int k = 2; k <= p; ++k) {
      if (!multi(o - 1, p, k)) continue;
      for (Op op : nary_) options.push_back({op, k});
    }
    if (root) {
      std::vector<Choice> temporal;
      for (const Choice& c : options) {
        if (is_temporal(c.op)) temporal.push_back(c);
      }
      if (!temporal.empty()) return rng.pick(temporal);
    }
    return rng.pick(options);
  }

  // Splits (o, p) into k feasible (o_i, p_i) parts, uniformly at each step.
  std::vector<std::pair<int, int>> split(int o, int p, int k, Rng& rng) {
    std::vector<std::pair<int, int>> parts;
    for (int left = k; left > 1; --left) {
      std::vector<std::pair<int, int>> options;
      for (int o1 = 0; o1 <= o; ++o1) {
        for (int p1 = 1; p1 <= p - left + 1; ++p1) {
          if (feasible(o1, p1) && multi(o - o1, p - p1, left - 1)) options.push_back({o1, p1});
        }
      }
      const auto part = rng.pick(options);
      parts.push_back(part);
      o -= part.first;
      p -= part.second;
    }
    parts.push_back({o, p});
    return parts;
  }

 private:
  std::vector<Op> unary_, binary_, nary_, edges_, temporal_;
  int feasible_[kMaxOps + 1][kMaxPreds + 1];
  int multi_[kMaxOps + 1][kMaxPreds + 1][kMaxPreds + 1];
};

// ---------------------------------------------------------------------------
// Numbers

constexpr std::array<int, 22> kNiceSeconds = {5,    10,   15,   20,   30,   45,   60,   90,
                                              120,  180,  300,  600,  900,  1200, 1800, 2700,
                                              3600, 5400, 7200, 10800, 14400, 21600};

class Numbers {
 public:
  Numbers(const TemplateSpec& spec, Rng& rng) : spec_(spec), rng_(rng) {
    lo_ = static_cast<int>(std::ceil(std::max(0.0, spec.horizon.lo)));
    hi_ = static_cast<int>(std::floor(spec.horizon.hi));
  }

  Interval window() {
    std::vector<int> his;
    for (int v : kNiceSeconds) {
      if (v > lo_ && v <= hi_) his.push_back(v);
    }
    const int hi = his.empty() ? lo_ + 1 + static_cast<int>(rng_.below(static_cast<std::size_t>(hi_ - lo_)))
                               : rng_.pick(his);
    int lo = lo_;
    if (rng_.chance(0.3)) {
      std::vector<int> los;
      for (int v : kNiceSeconds) {
        if (v >= lo_ && v < hi) los.push_back(v);
      }
      if (!los.empty()) lo = rng_.pick(los);
    }
    return {static_cast<double>(lo), static_cast<double>(hi)};
  }

  Predicate predicate() {
    const SignalRange& s = spec_.signals[rng_.below(spec_.signals.size())];
    static constexpr std::array<Comparator, 4> kCmp = {Comparator::Gt, Comparator::Ge,
                                                      Comparator::Lt, Comparator::Le};
    Predicate p;
    p.signal = s.signal;
    p.comparator = kCmp[rng_.below(kCmp.size())];
    p.threshold = std::round(rng_.uniform(s.min, s.max) * 10.0) / 10.0;
    if (p.threshold == 0.0) p.threshold = 0.0;
    return p;
  }

 private:
  const TemplateSpec& spec_;
  Rng& rng_;
  int lo_ = 0;
  int hi_ = 0;
};

Draft build(ShapePlanner& planner, Numbers& nums, int o, int p, bool root, Rng& rng) {
  Draft d;
  if (o == 0) {
    d.op = Op::Atom;
    d.pred = nums.predicate();
    return d;
  }
  const auto choice = planner.choose(o, p, root, rng);
  d.op = choice.op;
  if (is_temporal(d.op)) d.time = nums.window();
  if (d.op == Op::Rise || d.op == Op::Fall) {
    d.kids.push_back(build(planner, nums, 0, 1, false, rng));
    return d;
  }
  if (choice.k == 1) {
    d.kids.push_back(build(planner, nums, o - 1, p, false, rng));
    return d;
  }
  for (const auto& [oi, pi] : planner.split(o - 1, p, choice.k, rng)) {
    d.kids.push_back(build(planner, nums, oi, pi, false, rng));
  }
  return d;
}

StlNode to_node(const Draft& d) {
  switch (d.op) {
    case Op::Atom: return StlNode::atom(d.pred);
    case Op::True: return StlNode::truth();
    case Op::Not: return StlNode::negate(to_node(d.kids[0]));
    case Op::Rise: return StlNode::rise(to_node(d.kids[0]));
    case Op::Fall: return StlNode::fall(to_node(d.kids[0]));
    case Op::Imply: return StlNode::imply(to_node(d.kids[0]), to_node(d.kids[1]));
    case Op::Until: return StlNode::until(d.time, to_node(d.kids[0]), to_node(d.kids[1]));
    case Op::Since: return StlNode::since(d.time, to_node(d.kids[0]), to_node(d.kids[1]));
    case Op::And:
    case Op::Or: {
      std::vector<StlNode> kids;
      for (const Draft& k : d.kids) kids.push_back(to_node(k));
      return d.op == Op::And ? StlNode::conj(std::move(kids)) : StlNode::disj(std::move(kids));
    }
    default: return StlNode::temporal(d.op, d.time, to_node(d.kids[0]));
  }
}

// ---------------------------------------------------------------------------
// Tool annotations rewrite draft numbers in place.

std::string plural(long long n, const char* unit) {
  return std::to_string(n) + " " + unit + (n == 1 ? "" : "s");
}

// "30 minutes", "1 hour and 15 minutes", "half an hour"...
std::string duration_phrase(long long secs, Rng& rng) {
  if (secs == 1800 && rng.chance(0.5)) return "half an hour";
  const long long h = secs / 3600, m = secs % 3600 / 60, s = secs % 60;
  std::vector<std::string> parts;
  if (h) parts.push_back(plural(h, "hour"));
  if (m) parts.push_back(plural(m, "minute"));
  if (s) parts.push_back(plural(s, "second"));
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += (i + 1 == parts.size() ? " and " : ", ") + parts[i];
  return out;
}

std::string duration_zh(long long secs) {
  const long long h = secs / 3600, m = secs % 3600 / 60, s = secs % 60;
  std::string out;
  if (h) out += std::to_string(h) + "小时";
  if (m) out += std::to_string(m) + "分钟";
  if (s) out += std::to_string(s) + "秒";
  return out;
}

std::string clock(long long secs) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "2024-03-01 %02lld:%02lld:%02lld", secs / 3600, secs % 3600 / 60,
                secs % 60);
  return buf;
}

std::string integral(double v) { return std::to_string(static_cast<long long>(v)); }

struct Slot {
  Draft* node;
  bool time;  // interval upper bound, otherwise a threshold
};

void collect_slots(Draft& d, std::vector<Slot>& out) {
  if (is_temporal(d.op)) out.push_back({&d, true});
  if (d.op == Op::Atom) out.push_back({&d, false});
  for (Draft& k : d.kids) collect_slots(k, out);
}

const SignalRange* range_of(const TemplateSpec& spec, const std::string& signal) {
  for (const SignalRange& r : spec.signals) {
    if (r.signal == signal) return &r;
  }
  return nullptr;
}

std::optional<ToolAnnotation> annotate(const TemplateSpec& spec, Slot slot, Rng& rng) {
  std::vector<std::string> usable;
  const auto has = [&](const char* t) {
    return std::find(spec.tools.begin(), spec.tools.end(), t) != spec.tools.end();
  };
  Draft& d = *slot.node;
  if (slot.time) {
    const auto v = static_cast<long long>(d.time.hi);
    if (has("parse_duration")) usable.push_back("parse_duration");
    if (has("calc_time_diff") && v < 16 * 3600) usable.push_back("calc_time_diff");
    if (has("eval_math_expr") && v >= 4 && v % 2 == 0) usable.push_back("eval_math_expr");
    if (usable.empty()) return std::nullopt;
    const std::string tool = rng.pick(usable);
    ToolAnnotation a;
    a.tool = tool;
    a.expected_output = d.time.hi;
    a.target = TargetField::Time;
    if (tool == "parse_duration") {
      d.hi_en = duration_phrase(v, rng);
      d.hi_zh = duration_zh(v);
      a.args = {{"text", d.hi_en}};
    } else if (tool == "calc_time_diff") {
      const long long start = 8 * 3600 + static_cast<long long>(rng.below(4)) * 900;
      const std::string from = clock(start), to = clock(start + v);
      d.hi_en = "the span from " + from + " to " + to;
      d.hi_zh = "从" + from + "到" + to + "的时长";
      a.args = {{"start", from}, {"end", to}};
    } else {
      std::vector<long long> factors;
      for (long long f = 2; f <= 6; ++f) {
        if (v % f == 0 && v / f >= 2) factors.push_back(f);
      }
      const long long f = rng.pick(factors);
      const std::string expr = std::to_string(f) + "*" + std::to_string(v / f);
      d.hi_en = std::to_string(f) + " x " + std::to_string(v / f) + " seconds";
      d.hi_zh = std::to_string(f) + "乘" + std::to_string(v / f) + "秒";
      a.args = {{"expression", expr}};
    }
    return a;
  }

  const SignalRange* range = range_of(spec, d.pred.signal);
  if (has("convert_unit") && range && !range->unit.empty() && !range->alt_units.empty()) {
    const std::string& alt = rng.pick(range->alt_units);
    const ToolResult back = convert_unit(d.pred.threshold, range->unit, alt);
    if (back.ok) {
      const double surface = std::round(back.raw_value);
      const ToolResult fwd = convert_unit(surface, alt, range->unit);
      if (fwd.ok && surface != 0.0) {
        d.pred.threshold = fwd.value;
        d.value_en = integral(surface) + " " + alt;
        ToolAnnotation a;
        a.tool = "convert_unit";
        a.args = {{"value", surface}, {"from_unit", alt}, {"to_unit", range->unit}};
        a.expected_output = fwd.value;
        a.target = TargetField::Threshold;
        return a;
      }
    }
  }
  if (has("eval_math_expr")) {
    const auto whole = static_cast<long long>(std::round(d.pred.threshold));
    if (whole >= 4 && whole % 2 == 0) {
      d.pred.threshold = static_cast<double>(whole);
      const std::string expr = "2*" + std::to_string(whole / 2);
      d.value_en = "2 x " + std::to_string(whole / 2);
      ToolAnnotation a;
      a.tool = "eval_math_expr";
      a.args = {{"expression", expr}};
      a.expected_output = static_cast<double>(whole);
      a.target = TargetField::Threshold;
      return a;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text

std::string words(const std::string& signal) {
  std::string out = signal;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

class Renderer {
 public:
  Renderer(const TemplateSpec& spec, bool zh) : spec_(spec), zh_(zh) {}

  std::string render(const Draft& d) const {
    switch (d.op) {
      case Op::Atom: return atom(d);
      case Op::True: return zh_ ? "条件为真" : "true";
      case Op::Not: return zh_ ? "并非" + render(d.kids[0]) : "it is not the case that " + render(d.kids[0]);
      case Op::Rise: return zh_ ? render(d.kids[0]) + "开始成立" : render(d.kids[0]) + " starts to hold";
      case Op::Fall: return zh_ ? render(d.kids[0]) + "不再成立" : render(d.kids[0]) + " stops holding";
      case Op::Imply:
        return zh_ ? "如果" + render(d.kids[0]) + "，则" + render(d.kids[1])
                   : "if " + render(d.kids[0]) + ", then " + render(d.kids[1]);
      case Op::And:
      case Op::Or: return join(d);
      case Op::Globally:
        return zh_ ? window(d) + "内始终" + render(d.kids[0]) : render(d.kids[0]) + " at all times " + window(d);
      case Op::Finally:
        return zh_ ? window(d) + "内某一时刻" + render(d.kids[0])
                   : render(d.kids[0]) + " at some point " + window(d);
      case Op::Historically:
        return zh_ ? "过去" + window(d) + "内一直" + render(d.kids[0])
                   : render(d.kids[0]) + " throughout the past, " + window(d);
      case Op::Once:
        return zh_ ? "过去" + window(d) + "内曾经" + render(d.kids[0])
                   : render(d.kids[0]) + " at some earlier point, " + window(d);
      case Op::Until:
        return zh_ ? render(d.kids[0]) + "一直保持直到" + render(d.kids[1]) + "（" + window(d) + "）"
                   : render(d.kids[0]) + " until " + render(d.kids[1]) + ", " + window(d);
      case Op::Since:
        return zh_ ? "自" + render(d.kids[1]) + "以来" + render(d.kids[0]) + "（" + window(d) + "）"
                   : render(d.kids[0]) + " ever since " + render(d.kids[1]) + ", " + window(d);
    }
    return {};
  }

 private:
  std::string atom(const Draft& d) const {
    const Predicate& p = d.pred;
    std::string value = d.value_en;
    if (value.empty()) {
      value = format_decimal(p.threshold);
      if (value.size() > 2 && value.compare(value.size() - 2, 2, ".0") == 0) value.resize(value.size() - 2);
      const SignalRange* r = range_of(spec_, p.signal);
      if (r && !r->unit.empty()) value += " " + r->unit;
    }
    static constexpr std::array<const char*, 5> kEn = {"above", "at least", "below", "at most", "equal to"};
    static constexpr std::array<const char*, 5> kZh = {"大于", "不小于", "小于", "不大于", "等于"};
    const auto c = static_cast<std::size_t>(p.comparator);
    if (zh_) return words(p.signal) + kZh[c] + value;
    return "the " + words(p.signal) + " is " + kEn[c] + " " + value;
  }

  std::string join(const Draft& d) const {
    const bool conj = d.op == Op::And;
    std::string out;
    for (std::size_t i = 0; i < d.kids.size(); ++i) {
      if (i > 0) {
        if (zh_) {
          out += i + 1 == d.kids.size() ? (conj ? "并且" : "或者") : "，";
        } else {
          out += i + 1 == d.kids.size() ? (conj ? " and " : " or ") : ", ";
        }
      }
      out += render(d.kids[i]);
    }
    return zh_ ? out : "(" + out + ")";
  }

  std::string seconds(double v) const {
    const auto n = static_cast<long long>(v);
    return zh_ ? std::to_string(n) + "秒" : plural(n, "second");
  }

  std::string window(const Draft& d) const {
    const std::string hi = zh_ ? (d.hi_zh.empty() ? seconds(d.time.hi) : d.hi_zh)
                               : (d.hi_en.empty() ? seconds(d.time.hi) : d.hi_en);
    if (d.time.lo == 0.0) return zh_ ? hi : "within " + hi;
    return zh_ ? seconds(d.time.lo) + "到" + hi + "之间" : "between " + seconds(d.time.lo) + " and " + hi;
  }

  const TemplateSpec& spec_;
  bool zh_;
};

std::string render_text(const TemplateSpec& spec, const Draft& d, bool zh) {
  const Renderer r(spec, zh);
  if (zh) return "在" + spec.scenario + "场景中，要求" + r.render(d) + "。";
  std::string body = r.render(d);
  return "In the " + spec.scenario + " scenario, " + body + ".";
}

int pick_level(const TemplateSpec& spec, Rng& rng) {
  double total = 0.0;
  for (int lv : spec.complexity_levels) total += spec.level_weights[static_cast<std::size_t>(lv - 1)];
  double x = rng.unit() * total;
  for (int lv : spec.complexity_levels) {
    x -= spec.level_weights[static_cast<std::size_t>(lv - 1)];
    if (x < 0.0) return lv;
  }
  return spec.complexity_levels.back();
}

std::size_t tool_count(int level, Rng& rng) {
  if (level == 6) return 2 + rng.below(2);
  if (level == 5) return 1 + rng.below(2);
  return rng.chance(0.73) ? 1 : 0;
}

void check_spec(const TemplateSpec& spec, ShapePlanner& planner) {
  if (spec.signals.empty()) throw ConfigError("template declares no signals");
  for (const SignalRange& s : spec.signals) {
    if (!(s.min <= s.max)) throw ConfigError("empty admissible range for signal '" + s.signal + "'");
    if (!SignalVocabulary::standard().is_canonical(s.signal)) {
      throw ConfigError("signal '" + s.signal + "' is not in the vocabulary");
    }
    for (const std::string& u : s.alt_units) {
      if (s.unit.empty() || !is_known_unit(u) || !is_known_unit(s.unit)) {
        throw ConfigError("signal '" + s.signal + "' has an unusable unit option '" + u + "'");
      }
    }
  }
  if (spec.operators.empty()) throw ConfigError("template declares no operators");
  if (std::ceil(std::max(0.0, spec.horizon.lo)) >= std::floor(spec.horizon.hi)) {
    throw ConfigError("empty admissible time horizon");
  }
  if (spec.languages.empty()) throw ConfigError("template declares no languages");
  for (const std::string& l : spec.languages) {
    if (l != "en" && l != "zh") throw ConfigError("unsupported language '" + l + "'");
  }
  for (const std::string& t : spec.tools) {
    if (!tool_from_name(t)) throw ConfigError("unknown tool '" + t + "'");
  }
  const auto domain = domain_of_scenario(spec.scenario);
  if (!domain) throw ConfigError("unknown scenario '" + spec.scenario + "'");
  if (*domain != spec.domain) {
    throw ConfigError("scenario '" + spec.scenario + "' is not in domain '" + spec.domain + "'");
  }
  if (spec.complexity_levels.empty()) throw ConfigError("template declares no complexity levels");
  double weight = 0.0;
  for (int lv : spec.complexity_levels) {
    if (lv < 1 || lv > 6) throw ConfigError("complexity level " + std::to_string(lv) + " out of range");
    const auto [pmin, pmax] = kPredicateRange[static_cast<std::size_t>(lv - 1)];
    bool any = false;
    for (int p = pmin; p <= pmax; ++p) any = any || planner.feasible(lv, p);
    if (!any) {
      throw ConfigError("operators cannot build a level-" + std::to_string(lv) + " formula");
    }
    const double w = spec.level_weights[static_cast<std::size_t>(lv - 1)];
    if (w < 0.0) throw ConfigError("negative level weight");
    weight += w;
  }
  if (!(weight > 0.0)) throw ConfigError("level weights sum to zero");
}

}  // namespace

TemplateSpec template_from_json(const nlohmann::json& j) {
  try {
    TemplateSpec spec;
    spec.domain = j.at("domain").get<std::string>();
    spec.scenario = j.at("scenario").get<std::string>();
    for (const auto& s : j.at("signals")) {
      SignalRange r;
      r.signal = SignalVocabulary::standard().normalize(s.at("signal").get<std::string>());
      const auto& range = s.at("range");
      if (!range.is_array() || range.size() != 2) throw ConfigError("signal range must be [min, max]");
      r.min = range[0].get<double>();
      r.max = range[1].get<double>();
      r.unit = s.value("unit", "");
      r.alt_units = s.value("alt_units", std::vector<std::string>{});
      spec.signals.push_back(std::move(r));
    }
    for (const auto& o : j.at("operators")) {
      const auto op = op_from_name(o.get<std::string>());
      if (!op || *op == Op::Atom || *op == Op::True) {
        throw ConfigError("unknown operator '" + o.get<std::string>() + "'");
      }
      spec.operators.push_back(*op);
    }
    if (j.contains("horizon")) {
      const auto& h = j["horizon"];
      if (!h.is_array() || h.size() != 2) throw ConfigError("horizon must be [lo, hi]");
      spec.horizon = {h[0].get<double>(), h[1].get<double>()};
    }
    spec.tools = j.value("tools", std::vector<std::string>{});
    spec.languages = j.value("languages", spec.languages);
    spec.complexity_levels = j.value("complexity_levels", spec.complexity_levels);
    if (j.contains("level_weights")) {
      const auto w = j["level_weights"].get<std::vector<double>>();
      if (w.size() != 6) throw ConfigError("level_weights must have six entries");
      std::copy(w.begin(), w.end(), spec.level_weights.begin());
    }
    spec.allow_edges = j.value("allow_edges", false);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad template: ") + e.what());
  }
}

std::vector<Sample> generate_samples(const TemplateSpec& spec, std::size_t count,
                                     std::uint64_t seed) {
  ShapePlanner planner(spec);
  check_spec(spec, planner);
  Rng rng(seed);
  Numbers nums(spec, rng);
  std::vector<Sample> out;
  out.reserve(count);
  constexpr int kAttempts = 200;
  for (std::size_t i = 0; i < count; ++i) {
    const int level = pick_level(spec, rng);
    const std::string language = rng.pick(spec.languages);
    const auto [pmin, pmax] = kPredicateRange[static_cast<std::size_t>(level - 1)];
    std::vector<int> preds;
    for (int p = pmin; p <= pmax; ++p) {
      if (planner.feasible(level, p)) preds.push_back(p);
    }
    bool done = false;
    for (int attempt = 0; attempt < kAttempts && !done; ++attempt) {
      Draft draft = build(planner, nums, level, rng.pick(preds), true, rng);
      std::vector<Slot> slots;
      collect_slots(draft, slots);
      for (std::size_t k = slots.size(); k > 1; --k) std::swap(slots[k - 1], slots[rng.below(k)]);

      Sample s;
      s.complexity = level;
      s.language = language;
      s.domain = spec.domain;
      s.scenario = spec.scenario;
      std::size_t wanted = tool_count(level, rng);
      for (const Slot& slot : slots) {
        if (wanted == 0) break;
        if (auto a = annotate(spec, slot, rng)) {
          s.tool_annotations.push_back(std::move(*a));
          --wanted;
        }
      }
      s.reference = canonicalize(to_node(draft));
      s.nl_text = render_text(spec, draft, language == "zh");
      char id[64];
      std::snprintf(id, sizeof id, "gen-%llu-%06zu", static_cast<unsigned long long>(seed), i);
      s.id = id;
      if (validate_sample(s).empty()) {
        out.push_back(std::move(s));
        done = true;
      }
    }
    if (!done) {
      throw ConfigError("template cannot produce a valid level-" + std::to_string(level) + " sample");
    }
  }
  return out;
}

}  // namespace stlforge
