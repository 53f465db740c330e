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
#include <vector>

#include "oracles.hpp"
#include "stlforge/ast.hpp"
#include "stlforge/error.hpp"
#include "stlforge/semantics.hpp"

using namespace stlforge;

namespace {

Trace x_trace(std::vector<double> xs) { return Trace({{"x", std::move(xs)}}); }

StlNode x_pos() { return StlNode::atom("x>0"); }

}  // namespace

TEST_SUITE("semantics") {

TEST_CASE("worked examples") {
  CHECK(satisfies(StlNode::temporal(Op::Finally, {0, 2}, x_pos()), x_trace({-1, -1, 1}), 0));
  CHECK_FALSE(satisfies(StlNode::temporal(Op::Globally, {0, 2}, x_pos()), x_trace({1, 1, -1}), 0));
  const StlNode rise = StlNode::rise(x_pos());
  CHECK(satisfies(rise, x_trace({-1, 1}), 1));
  CHECK_FALSE(satisfies(rise, x_trace({-1, 1}), 0));
  CHECK(satisfies(StlNode::fall(x_pos()), x_trace({1, -1}), 1));
  CHECK(satisfies_trace(StlNode::truth(), x_trace({-5})));
}

TEST_CASE("altitude/speed witness at sample 10") {
  std::vector<double> alt(20, 1000.0), spd(20, 50.0);
  for (std::size_t i = 10; i < 20; ++i) {
    alt[i] = 3100.0;
    spd[i] = 102.89;
  }
  const StlNode f = StlNode::temporal(
      Op::Finally, {0, 1800}, StlNode::conj({StlNode::atom("altitude>3048.0"), StlNode::atom("speed>=102.89")}));
  const Trace tr({{"altitude", alt}, {"speed", spd}});
  CHECK(satisfies_trace(f, tr));
  CHECK(satisfies_trace(f, tr) == satisfies(f, tr, 0));
  CHECK_FALSE(satisfies(StlNode::temporal(Op::Finally, {0, 9}, *f.right()), tr, 0));
  CHECK(satisfies(StlNode::temporal(Op::Finally, {0, 9}, *f.right()), tr, 1));
}

TEST_CASE("bounded windows") {
  const Trace tr = x_trace({-1, -1, -1});
  // Window entirely past the end: existential false, universal true.
  CHECK_FALSE(satisfies(StlNode::temporal(Op::Finally, {5, 9}, StlNode::truth()), tr, 0));
  CHECK(satisfies(StlNode::temporal(Op::Globally, {5, 9}, x_pos()), tr, 0));
  CHECK(satisfies(StlNode::temporal(Op::Historically, {1, 4}, x_pos()), tr, 0));
  CHECK(satisfies(StlNode::temporal(Op::Once, {0, 4}, StlNode::truth()), tr, 0));
  // Non-integer bounds shrink inward.
  const Trace t2 = x_trace({-1, 1, -1});
  CHECK_FALSE(satisfies(StlNode::temporal(Op::Finally, {0.5, 0.9}, x_pos()), t2, 0));
  CHECK(satisfies(StlNode::temporal(Op::Finally, {0.5, 1.0}, x_pos()), t2, 0));
}

TEST_CASE("equality tolerance") {
  const StlNode eq = StlNode::atom("x==1");
  CHECK(satisfies(eq, x_trace({1.0 + 5e-10}), 0));
  CHECK_FALSE(satisfies(eq, x_trace({1.0 + 5e-9}), 0));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(satisfies(StlNode::atom("y>0"), x_trace({1}), 0), EvalError);
  try {
    satisfies(StlNode::atom("y>0"), x_trace({1}), 0);
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrc::UnknownSignal);
  }
  try {
    satisfies(x_pos(), x_trace({1}), 1);
    FAIL("expected IndexOutOfRange");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrc::IndexOutOfRange);
  }
  CHECK_THROWS_AS(Trace({}), EvalError);
  CHECK_THROWS_AS(Trace({{"x", {1, 2}}, {"y", {1}}}), EvalError);
}

TEST_CASE("trace files") {
  const Trace csv = parse_trace_csv("x,y\n1,2\n3,4\n");
  CHECK(csv.length() == 2);
  CHECK(csv.signal("y")[1] == 4.0);
  const Trace js = parse_trace_json(R"({"x":[1,3],"y":[2,4]})");
  CHECK(js.signals() == csv.signals());
  CHECK_THROWS_AS(parse_trace_csv("x,y\n1\n"), EvalError);
}

TEST_CASE("Until, Since, H, O over all length-6 patterns") {
  const StlNode p = StlNode::atom("x>0");
  const StlNode q = StlNode::atom("y>0");
  const std::vector<StlNode> formulas = {
      StlNode::until({0, 3}, p, q),        StlNode::until({1, 2}, p, q),
      StlNode::until({2, 9}, q, p),        StlNode::since({0, 3}, p, q),
      StlNode::since({1, 4}, q, p),        StlNode::temporal(Op::Historically, {0, 2}, p),
      StlNode::temporal(Op::Historically, {2, 4}, q),
      StlNode::temporal(Op::Once, {1, 3}, p), StlNode::temporal(Op::Once, {0, 0}, q),
  };
  std::size_t disagreements = 0;
  for (unsigned bits = 0; bits < (1u << 12); ++bits) {
    oracle::Signals w;
    for (int i = 0; i < 6; ++i) {
      w["x"].push_back((bits >> i) & 1 ? 1.0 : -1.0);
      w["y"].push_back((bits >> (i + 6)) & 1 ? 1.0 : -1.0);
    }
    const Trace tr(w);
    for (const auto& f : formulas) {
      const auto all = evaluate_all(f, tr);
      for (long k = 0; k < 6; ++k) disagreements += all[static_cast<std::size_t>(k)] != oracle::sat(f, w, k);
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("random formulas agree with the expansion oracle") {
  oracle::Rng rng(3);
  oracle::TreeOptions o;
  std::size_t disagreements = 0;
  for (int i = 0; i < 400; ++i) {
    const StlNode f = oracle::random_tree(rng, 4, o);
    const auto w = oracle::random_signals(rng, o, static_cast<std::size_t>(rng.range(1, 12)));
    const auto all = evaluate_all(f, Trace(w));
    for (std::size_t k = 0; k < all.size(); ++k) disagreements += all[k] != oracle::sat(f, w, static_cast<long>(k));
  }
  CHECK(disagreements == 0);
}

TEST_CASE("Rise and Fall are exclusive") {
  oracle::Rng rng(5);
  oracle::TreeOptions o;
  for (int i = 0; i < 200; ++i) {
    const StlNode a = StlNode::atom(oracle::random_predicate(rng, o));
    const auto w = oracle::random_signals(rng, o, 10);
    const auto r = evaluate_all(StlNode::rise(a), Trace(w));
    const auto f = evaluate_all(StlNode::fall(a), Trace(w));
    for (std::size_t k = 0; k < r.size(); ++k) CHECK_FALSE((r[k] && f[k]));
  }
}

}  // TEST_SUITE
