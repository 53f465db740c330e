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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stlforge/ast.hpp"
#include "stlforge/bench.hpp"
#include "stlforge/matcher.hpp"
#include "stlforge/reward.hpp"
#include "stlforge/semantics.hpp"
#include "stlforge/tools.hpp"

using namespace stlforge;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  int failures = 0;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (++failures <= 3) detail << (failures > 1 ? "; " : "") << what;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void tool_table(Outcome& o) {
  const auto t0 = Clock::now();
  struct Row {
    const char* label;
    ToolResult result;
    ToolName tool;
    double value;
    const char* wire;
  };
  const Row rows[] = {
      {"parse_duration", parse_duration("30 minutes"), ToolName::ParseDuration, 1800.0, "1800"},
      {"convert_unit ft", convert_unit(10000, "ft", "m"), ToolName::ConvertUnit, 3048.0, "3048.0"},
      {"convert_unit kn", convert_unit(200, "kn", "m/s"), ToolName::ConvertUnit, 102.89, "102.89"},
      {"eval_math_expr", execute(parse_tool_call(R"({"name":"eval_math_expr","arguments":{"expression":"2*900"}})")),
       ToolName::EvalMathExpr, 1800.0, "1800"},
      {"calc_time_diff",
       calc_time_diff("time interval between 2025-08-01 8:00:00 and 2025-08-01 8:15:00"),
       ToolName::CalcTimeDiff, 900.0, "900"},
  };
  for (const Row& r : rows) {
    o.expect(r.result.ok, std::string(r.label) + " failed");
    o.expect(r.result.value == r.value, std::string(r.label) + " value " + format_decimal(r.result.value));
    o.expect(format_tool_value(r.tool, r.result.value) == r.wire, std::string(r.label) + " wire form");
  }
  const double dt = seconds_since(t0);
  o.expect(dt < 1.0, "took " + std::to_string(dt) + " s");
  o.detail << (o.pass ? "5 rows exact, " : " | ") << dt << " s";
}

// ---------------------------------------------------------------------------

std::vector<StlNode> semantics_formulas() {
  const StlNode p = StlNode::atom("x>0"), q = StlNode::atom("y>0");
  using I = Interval;
  return {
      StlNode::temporal(Op::Finally, I{0, 2}, p),
      StlNode::temporal(Op::Globally, I{1, 3}, p),
      StlNode::temporal(Op::Historically, I{0, 2}, p),
      StlNode::temporal(Op::Once, I{1, 4}, p),
      StlNode::rise(p),
      StlNode::fall(p),
      StlNode::temporal(Op::Globally, I{0, 3}, StlNode::negate(p)),
      StlNode::temporal(Op::Finally, I{0, 7}, StlNode::rise(p)),
      StlNode::temporal(Op::Historically, I{1, 3}, StlNode::fall(p)),
      StlNode::until(I{0, 3}, p, q),
      StlNode::until(I{2, 5}, p, q),
      StlNode::since(I{0, 3}, p, q),
      StlNode::since(I{1, 2}, q, p),
      StlNode::imply(p, StlNode::temporal(Op::Finally, I{0, 2}, q)),
      StlNode::temporal(Op::Globally, I{0, 4}, StlNode::conj({p, q})),
      StlNode::temporal(Op::Finally, I{2, 6}, StlNode::disj({p, q})),
      StlNode::conj({StlNode::temporal(Op::Once, I{0, 2}, p), StlNode::temporal(Op::Historically, I{0, 1}, q)}),
      StlNode::temporal(Op::Finally, I{0, 3}, StlNode::until(I{0, 2}, p, q)),
      StlNode::temporal(Op::Once, I{0, 3}, StlNode::since(I{0, 2}, q, p)),
      StlNode::temporal(Op::Globally, I{0, 5}, StlNode::imply(p, q)),
  };
}

bool uses_y(const StlNode& f) {
  for (const Predicate& p : collect_predicates(f)) {
    if (p.signal == "y") return true;
  }
  return false;
}

void semantics_oracle(Outcome& o) {
  const auto t0 = Clock::now();
  const auto formulas = semantics_formulas();
  o.expect(formulas.size() == 20, "formula set size");
  constexpr int kLen = 8;
  std::size_t checks = 0, disagreements = 0;
  for (const StlNode& f : formulas) {
    o.expect(f.depth() <= 3, "depth of " + to_string(f));
    const bool two = uses_y(f);
    const unsigned patterns = two ? (1u << (2 * kLen)) : (1u << kLen);
    for (unsigned bits = 0; bits < patterns; ++bits) {
      oracle::Signals w;
      for (int i = 0; i < kLen; ++i) {
        w["x"].push_back((bits >> i) & 1 ? 1.0 : -1.0);
        w["y"].push_back(two && ((bits >> (i + kLen)) & 1) ? 1.0 : -1.0);
      }
      const Trace tr(w);
      for (long k = 0; k < kLen; ++k) {
        ++checks;
        if (satisfies(f, tr, static_cast<std::size_t>(k)) != oracle::sat(f, w, k)) {
          ++disagreements;
          o.expect(false, to_string(f) + " at k=" + std::to_string(k));
        }
      }
    }
  }
  const double dt = seconds_since(t0);
  o.expect(dt < 30.0, "took " + std::to_string(dt) + " s");
  o.detail << (o.pass ? "" : " | ") << checks << " checks, " << disagreements << " disagreements, " << dt << " s";
}

// ---------------------------------------------------------------------------

void dualities(Outcome& o) {
  oracle::Rng rng(2024);
  oracle::TreeOptions opts;
  std::size_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const StlNode phi = oracle::random_tree(rng, 3, opts);
    const Interval iv = oracle::random_interval(rng, opts);
    const auto w = oracle::random_signals(rng, opts, static_cast<std::size_t>(rng.range(1, 12)));
    const Trace tr(w);
    const std::size_t k = static_cast<std::size_t>(rng.range(0, static_cast<int>(tr.length()) - 1));
    const bool f = satisfies(StlNode::temporal(Op::Finally, iv, phi), tr, k);
    const bool tu = satisfies(StlNode::until(iv, StlNode::truth(), phi), tr, k);
    const bool g = satisfies(StlNode::temporal(Op::Globally, iv, phi), tr, k);
    const bool nfn = !satisfies(StlNode::temporal(Op::Finally, iv, StlNode::negate(phi)), tr, k);
    const bool once = satisfies(StlNode::temporal(Op::Once, iv, phi), tr, k);
    const bool nhn = !satisfies(StlNode::temporal(Op::Historically, iv, StlNode::negate(phi)), tr, k);
    const bool ok = f == tu && g == nfn && once == nhn;
    violations += !ok;
    o.expect(ok, "triple " + std::to_string(i) + ": " + to_string(phi));
  }
  o.detail << (o.pass ? "" : " | ") << "1000 triples, " << violations << " violations";
}

// ---------------------------------------------------------------------------

StlNode random_commutative(oracle::Rng& rng, const oracle::TreeOptions& opts) {
  std::vector<StlNode> kids;
  const int n = rng.range(2, 6);
  for (int i = 0; i < n; ++i) kids.push_back(oracle::random_tree(rng, 3, opts));
  return rng.coin() ? StlNode::conj(std::move(kids)) : StlNode::disj(std::move(kids));
}

void matcher_invariants(Outcome& o) {
  oracle::Rng rng(500);
  oracle::TreeOptions opts;
  opts.max_children = 5;
  int identity = 0, permutation = 0;
  for (int i = 0; i < 500; ++i) {
    const StlNode t = oracle::random_tree(rng, 5, opts);
    const MatchScore s = tree_match(t, t);
    identity += s.value == 1.0 && s.exact;
  }
  o.expect(identity == 500, "identity held on " + std::to_string(identity) + "/500");

  for (int i = 0; i < 500; ++i) {
    const StlNode ref = random_commutative(rng, opts);
    const StlNode pred = rng.coin(0.3) ? ref : random_commutative(rng, opts);
    const double base = tree_match(pred, ref).value;
    const double a = tree_match(oracle::shuffle_commutative(pred, rng), ref).value;
    const double b = tree_match(pred, oracle::shuffle_commutative(ref, rng)).value;
    const bool ok = a == base && b == base;
    permutation += ok;
    if (!ok) {
      std::ostringstream m;
      m.precision(17);
      m << "permutation changed " << base << " to " << a << "/" << b;
      o.expect(false, m.str());
    }
  }

  const StlNode child = StlNode::atom("altitude>3048.0");
  const StlNode ref = StlNode::temporal(Op::Finally, {0, 1800}, child);
  for (double delta : {0.0, 0.05, 0.1, 0.100001, 1.0}) {
    const bool want = delta <= 0.1;
    const StlNode by_time = StlNode::temporal(Op::Finally, {0, 1800 + delta}, child);
    const StlNode by_threshold =
        StlNode::temporal(Op::Finally, {0, 1800}, StlNode::atom(Predicate{"altitude", Comparator::Gt, 3048.0 + delta}));
    const StlNode by_both = StlNode::temporal(Op::Finally, {delta, 1800 - delta},
                                              StlNode::atom(Predicate{"altitude", Comparator::Gt, 3048.0 - delta}));
    for (const StlNode* p : {&by_time, &by_threshold, &by_both}) {
      const MatchScore s = tree_match(*p, ref);
      o.expect(s.exact == want && tree_match(ref, *p).exact == want,
               "delta " + std::to_string(delta) + " on " + to_string(*p));
      if (!want) o.expect(s.value == 0.0, "mismatched interval or leaf kept credit");
    }
  }

  int zeroed = 0;
  const std::pair<Op, Op> swaps[] = {{Op::Globally, Op::Finally}, {Op::Historically, Op::Once},
                                     {Op::Finally, Op::Once},     {Op::Globally, Op::Historically}};
  for (int i = 0; i < 200; ++i) {
    const StlNode c = oracle::random_tree(rng, 4, opts);
    const auto [a, b] = swaps[i % 4];
    const Interval iv = oracle::random_interval(rng, opts);
    zeroed += tree_match(StlNode::temporal(a, iv, c), StlNode::temporal(b, iv, c)).value == 0.0;
    const StlNode u = StlNode::until(iv, c, c), s = StlNode::since(iv, c, c);
    zeroed += tree_match(u, s).value == 0.0;
  }
  o.expect(zeroed == 400, "wrong root kept credit in " + std::to_string(400 - zeroed) + " cases");
  o.detail << (o.pass ? "" : " | ") << "identity 500/500, permutation " << permutation
           << "/500, delta sweep, wrong root " << zeroed << "/400";
}

// ---------------------------------------------------------------------------

StlNode perturb_leaves(const StlNode& n, oracle::Rng& rng) {
  StlNodeParts p;
  p.op = n.op();
  p.time = n.time();
  if (n.predicate()) {
    Predicate q = *n.predicate();
    if (rng.coin(0.3)) q.threshold += 1.0;
    p.predicate = q;
  }
  if (n.left()) p.left = perturb_leaves(*n.left(), rng);
  if (n.right()) p.right = perturb_leaves(*n.right(), rng);
  for (const auto& c : n.children()) p.children.push_back(perturb_leaves(c, rng));
  return StlNode::make(std::move(p));
}

void reward_calculus(Outcome& o) {
  RewardConfig cfg;
  cfg.tau = 0.5;
  cfg.kappa = 0.3;
  oracle::Rng rng(1000);
  std::size_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<bool> c;
    const int n = rng.range(0, 8);
    for (int k = 0; k < n; ++k) c.push_back(rng.coin(0.75));
    const bool cf = rng.coin();
    const auto r = process_rewards(c, cf, cfg);
    bool ok = r.size() == c.size() && r == oracle::process_rewards(c, cf, cfg.tau);
    bool failed = false;
    for (std::size_t k = 0; k < r.size(); ++k) {
      ok = ok && (r[k] == 0.0 || r[k] == 0.5 || r[k] == 1.0);
      if (!cf) ok = ok && r[k] <= 0.5;
      if (failed) ok = ok && r[k] == 0.0;
      failed = failed || !c[k];
    }
    violations += !ok;
    o.expect(ok, "verdict vector " + std::to_string(i));
  }

  // Exactness dominance over scored outcomes.
  oracle::TreeOptions opts;
  double min_exact = 2.0, max_partial = -1.0;
  int partial = 0;
  for (int i = 0; i < 1000; ++i) {
    const StlNode ref = oracle::random_tree(rng, 4, opts);
    const int mode = rng.range(0, 3);
    const StlNode pred = mode == 0   ? ref
                         : mode == 1 ? oracle::shuffle_commutative(ref, rng)
                         : mode == 2 ? perturb_leaves(ref, rng)
                                     : oracle::random_tree(rng, 4, opts);
    const RewardReport rep = score_rollout(serialize_stl_json(pred), ref, cfg);
    const OutcomeScore& s = rep.outcome;
    const bool sane = s.r_out == s.r_fmt * s.r_cnt && (s.c_final == 1.0) == (s.r_fmt == 1.0 && s.s_tree == 1.0) &&
                      s.r_out >= 0.0 && s.r_out <= 1.0;
    violations += !sane;
    o.expect(sane, "outcome invariants for rollout " + std::to_string(i));
    if (s.c_final == 1.0) {
      min_exact = std::min(min_exact, s.r_out);
    } else {
      max_partial = std::max(max_partial, s.r_out);
      partial += s.s_tree > 0.0;
    }
  }
  o.expect(max_partial < min_exact, "partial rollout reached " + std::to_string(max_partial));
  o.expect(max_partial <= cfg.kappa, "partial credit above kappa");
  o.expect(partial > 0, "no rollout earned partial credit");
  o.detail << (o.pass ? "" : " | ") << "1000 verdict vectors, " << violations << " violations, " << partial
           << " partial rollouts, max partial r_out " << max_partial << " < min exact " << min_exact;
}

// ---------------------------------------------------------------------------

void advantage_normalization(Outcome& o) {
  RewardConfig cfg;
  oracle::Rng rng(8);
  const double levels[] = {0.0, 0.075, 0.15, 0.2, 0.3, 1.0};
  int groups = 0, constant = 0;
  for (int g = 0; g < 1000; ++g) {
    std::vector<RewardReport> reports(8);
    const bool make_constant = g % 10 == 0;
    const double fixed = levels[rng.range(0, 5)];
    for (auto& r : reports) r.outcome.r_out = make_constant ? fixed : levels[rng.range(0, 5)];
    std::vector<double> xs;
    for (const auto& r : reports) xs.push_back(r.outcome.r_out);
    const double sd = oracle::population_std(xs);
    group_advantages(reports, cfg);
    std::vector<double> a;
    for (const auto& r : reports) a.push_back(r.a_out);
    if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) {
      ++constant;
      o.expect(std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; }), "constant group not zero");
      continue;
    }
    ++groups;
    std::ostringstream m;
    m.precision(17);
    const double scaled = oracle::population_std(a) * (sd + cfg.epsilon) / sd;
    m << "mean " << oracle::mean(a) << ", scaled std " << scaled;
    o.expect(std::fabs(oracle::mean(a)) <= 1e-9 && std::fabs(scaled - 1.0) <= 1e-6, m.str());
  }
  o.detail << (o.pass ? "" : " | ") << groups << " varied groups, " << constant << " constant groups";
}

// ---------------------------------------------------------------------------

void roundtrip_and_dedup(Outcome& o) {
  oracle::Rng rng(77);
  oracle::TreeOptions opts;
  opts.signals = {"altitude", "speed", "temp", "pressure", "rpm", "x_pos"};
  opts.max_bound = 3600;
  opts.threshold_lo = -1000;
  opts.threshold_hi = 1000;
  opts.threshold_step = 0.01;
  opts.max_children = 6;
  int roundtrips = 0;
  for (int i = 0; i < 1000; ++i) {
    const StlNode t = oracle::random_tree(rng, rng.range(1, 6), opts);
    const std::string s = serialize_stl_json(t);
    const bool ok = parse_stl_json(s) == canonicalize(t) && serialize_stl_json(parse_stl_json(s)) == s;
    roundtrips += ok;
    o.expect(ok, "round trip of " + s);
  }

  const char* specs[] = {fixtures::kAltitudeHold, fixtures::kEmergencyBraking, fixtures::kBoiler};
  std::size_t generated = 0, valid = 0, fixpoints = 0;
  for (int c = 0; c < 3; ++c) {
    const auto spec = template_from_json(nlohmann::json::parse(specs[c]));
    auto samples = generate_samples(spec, 2000, 100 + static_cast<std::uint64_t>(c));
    for (const auto& s : samples) {
      ++generated;
      const bool ok = validate_sample(s).empty();
      valid += ok;
      if (!ok) o.expect(false, "generated sample " + s.id + " is invalid");
    }
    // Inject repeats so the first pass has something to remove.
    std::vector<Sample> corpus = samples;
    for (std::size_t i = 0; i < samples.size(); i += 7) corpus.push_back(samples[i]);
    const auto once = symbolic_dedup(corpus);
    const auto twice = symbolic_dedup(once);
    const bool fix = write_samples_jsonl(once) == write_samples_jsonl(twice) && once.size() <= samples.size();
    fixpoints += fix;
    o.expect(fix, "dedup not idempotent on corpus " + std::to_string(c));
  }
  o.detail << (o.pass ? "" : " | ") << "round trip " << roundtrips << "/1000, dedup fixpoint " << fixpoints
           << "/3, generator valid " << valid << "/" << generated;
}

// ---------------------------------------------------------------------------

void metrics_ordering(Outcome& o) {
  oracle::Rng rng(31);
  oracle::TreeOptions opts;
  int sets = 0;
  for (int set = 0; set < 200; ++set) {
    std::vector<PredictionPair> pairs;
    const int n = rng.range(1, 40);
    for (int i = 0; i < n; ++i) {
      const StlNode ref = oracle::random_tree(rng, 4, opts);
      std::string out;
      switch (rng.range(0, 4)) {
        case 0: out = serialize_stl_json(ref); break;
        case 1: out = serialize_stl_json(perturb_leaves(ref, rng)); break;
        case 2: out = serialize_stl_json(oracle::random_tree(rng, 4, opts)); break;
        case 3: out = serialize_stl_json(oracle::shuffle_commutative(ref, rng)); break;
        default: out = rng.coin() ? "" : "{\"STL\": {\"Operation\": \"Finally\"}}"; break;
      }
      pairs.emplace_back(out, ref);
    }
    const double fmt = format_accuracy(pairs), fml = formula_accuracy(pairs);
    ++sets;
    o.expect(fml <= fmt, "set " + std::to_string(set) + ": " + std::to_string(fml) + " > " + std::to_string(fmt));
  }
  o.detail << (o.pass ? "" : " | ") << sets << " evaluation sets";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {"tool-table", tool_table},
      {"semantics-oracle", semantics_oracle},
      {"duality", dualities},
      {"matcher-invariants", matcher_invariants},
      {"reward-calculus", reward_calculus},
      {"advantage-normalization", advantage_normalization},
      {"roundtrip-dedup-generator", roundtrip_and_dedup},
      {"metrics-ordering", metrics_ordering},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
