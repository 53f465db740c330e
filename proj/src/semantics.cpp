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

#include "stlforge/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace stlforge {

bool holds(const Predicate& p, double sample) noexcept {
  switch (p.comparator) {
    case Comparator::Gt: return sample > p.threshold;
    case Comparator::Ge: return sample >= p.threshold;
    case Comparator::Lt: return sample < p.threshold;
    case Comparator::Le: return sample <= p.threshold;
    case Comparator::Eq:
      return std::fabs(sample - p.threshold) <= kEqualityTolerance;
  }
  return false;
}

namespace {

using Signal = std::vector<std::uint8_t>;
using Index = std::int64_t;

// Integer sample offsets covered by a window; non-integral bounds shrink
// inward. `empty` when no integer lies inside.
struct Offsets {
  Index lo;
  Index hi;
  bool empty;
};

Offsets offsets(const Interval& t) {
  const double lo = std::ceil(t.lo);
  const double hi = std::floor(t.hi);
  if (lo > hi) return {0, -1, true};
  // Anything past 2^62 samples is beyond every trace anyway.
  constexpr double kCap = 4.0e18;
  return {static_cast<Index>(std::min(lo, kCap)),
          static_cast<Index>(std::min(hi, kCap)), false};
}

// Count of true samples in [lo, hi] via prefix sums; requires lo <= hi in
// range.
struct PrefixCount {
  explicit PrefixCount(const Signal& s) : sums(s.size() + 1, 0) {
    for (std::size_t i = 0; i < s.size(); ++i) sums[i + 1] = sums[i] + s[i];
  }
  Index count(Index lo, Index hi) const { return sums[hi + 1] - sums[lo]; }
  std::vector<Index> sums;
};

// Clamped absolute window [k + lo, k + hi] (future) or [k - hi, k - lo]
// (past), intersected with [0, n - 1]. Returns false when empty.
bool window(Index k, const Offsets& off, bool past, Index n, Index& from,
            Index& to) {
  if (off.empty) return false;
  if (past) {
    from = k - off.hi;
    to = k - off.lo;
  } else {
    from = k + off.lo;
    to = k + off.hi;
    if (from < k) return false;  // overflow guard
  }
  from = std::max<Index>(from, 0);
  to = std::min<Index>(to, n - 1);
  return from <= to;
}

Signal eval(const StlNode& f, const Trace& trace);

Signal window_quantifier(const StlNode& f, const Trace& trace, bool past,
                         bool universal) {
  const Signal inner = eval(*f.right(), trace);
  const Index n = static_cast<Index>(inner.size());
  const PrefixCount prefix(inner);
  const Offsets off = offsets(*f.time());
  Signal out(inner.size());
  for (Index k = 0; k < n; ++k) {
    Index from = 0;
    Index to = 0;
    if (!window(k, off, past, n, from, to)) {
      out[k] = universal ? 1 : 0;
      continue;
    }
    const Index hits = prefix.count(from, to);
    out[k] = universal ? (hits == to - from + 1) : (hits > 0);
  }
  return out;
}

// lhs U[a,b] rhs: some k' in the window has rhs, and lhs holds on [k, k').
Signal until(const StlNode& f, const Trace& trace) {
  const Signal lhs = eval(*f.left(), trace);
  const Signal rhs = eval(*f.right(), trace);
  const Index n = static_cast<Index>(lhs.size());
  const Offsets off = offsets(*f.time());
  Signal out(lhs.size(), 0);
  if (off.empty) return out;
  for (Index k = 0; k < n; ++k) {
    Index from = 0;
    Index to = 0;
    if (!window(k, off, false, n, from, to)) continue;
    for (Index j = k; j <= to; ++j) {
      if (j >= from && rhs[j]) {
        out[k] = 1;
        break;
      }
      if (!lhs[j]) break;
    }
  }
  return out;
}

// lhs S[a,b] rhs: some k' in [k-b, k-a] has rhs, and lhs holds on (k', k].
Signal since(const StlNode& f, const Trace& trace) {
  const Signal lhs = eval(*f.left(), trace);
  const Signal rhs = eval(*f.right(), trace);
  const Index n = static_cast<Index>(lhs.size());
  const Offsets off = offsets(*f.time());
  Signal out(lhs.size(), 0);
  if (off.empty) return out;
  for (Index k = 0; k < n; ++k) {
    Index from = 0;
    Index to = 0;
    if (!window(k, off, true, n, from, to)) continue;
    for (Index j = k; j >= from; --j) {
      if (j <= to && rhs[j]) {
        out[k] = 1;
        break;
      }
      if (!lhs[j]) break;
    }
  }
  return out;
}

Signal edge(const StlNode& f, const Trace& trace, bool rising) {
  const Signal inner = eval(*f.right(), trace);
  Signal out(inner.size(), 0);
  for (std::size_t k = 1; k < inner.size(); ++k) {
    out[k] = rising ? (!inner[k - 1] && inner[k]) : (inner[k - 1] && !inner[k]);
  }
  return out;
}

Signal eval(const StlNode& f, const Trace& trace) {
  const std::size_t n = trace.length();
  switch (f.op()) {
    case Op::True: return Signal(n, 1);
    case Op::Atom: {
      const Predicate& p = *f.predicate();
      const auto samples = trace.signal(p.signal);
      Signal out(n);
      for (std::size_t k = 0; k < n; ++k) out[k] = holds(p, samples[k]);
      return out;
    }
    case Op::Not: {
      Signal out = eval(*f.right(), trace);
      for (auto& v : out) v = !v;
      return out;
    }
    case Op::And:
    case Op::Or: {
      const bool conj = f.op() == Op::And;
      Signal out(n, conj ? 1 : 0);
      for (const StlNode& c : f.children()) {
        const Signal s = eval(c, trace);
        for (std::size_t k = 0; k < n; ++k) {
          out[k] = conj ? (out[k] && s[k]) : (out[k] || s[k]);
        }
      }
      return out;
    }
    case Op::Imply: {
      const Signal lhs = eval(*f.left(), trace);
      Signal out = eval(*f.right(), trace);
      for (std::size_t k = 0; k < n; ++k) out[k] = !lhs[k] || out[k];
      return out;
    }
    case Op::Finally: return window_quantifier(f, trace, false, false);
    case Op::Globally: return window_quantifier(f, trace, false, true);
    case Op::Once: return window_quantifier(f, trace, true, false);
    case Op::Historically: return window_quantifier(f, trace, true, true);
    case Op::Until: return until(f, trace);
    case Op::Since: return since(f, trace);
    case Op::Rise: return edge(f, trace, true);
    case Op::Fall: return edge(f, trace, false);
  }
  return Signal(n, 0);
}

void check_signals(const StlNode& f, const Trace& trace) {
  if (f.predicate() && !trace.has_signal(f.predicate()->signal)) {
    throw EvalError(EvalErrc::UnknownSignal,
                    "trace has no signal '" + f.predicate()->signal + "'");
  }
  for (const StlNode* c : f.operands()) check_signals(*c, trace);
}

}  // namespace

std::vector<bool> evaluate_all(const StlNode& formula, const Trace& trace) {
  check_signals(formula, trace);
  const Signal s = eval(formula, trace);
  return std::vector<bool>(s.begin(), s.end());
}

bool satisfies(const StlNode& formula, const Trace& trace, std::size_t k) {
  if (k >= trace.length()) {
    throw EvalError(EvalErrc::IndexOutOfRange,
                    "index " + std::to_string(k) + " outside trace of length " +
                        std::to_string(trace.length()));
  }
  return evaluate_all(formula, trace)[k];
}

bool satisfies_trace(const StlNode& formula, const Trace& trace) {
  return satisfies(formula, trace, 0);
}

}  // namespace stlforge
