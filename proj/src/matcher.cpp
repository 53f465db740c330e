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

#include "stlforge/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stlforge {

bool within_tolerance(double a, double b, double tol) noexcept {
  const double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(tol), 1.0});
  return std::fabs(a - b) <= tol + 8 * std::numeric_limits<double>::epsilon() * scale;
}

bool MatchConfig::is_commutative(Op op) const {
  return std::find(commutative_ops.begin(), commutative_ops.end(), op) !=
         commutative_ops.end();
}

namespace {

constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2;

bool close(double a, double b, double tol) { return within_tolerance(a, b, tol); }

MatchScore finish(double sum, std::size_t count, bool exact) {
  if (exact) return {1.0, true};
  const double v = count == 0 ? 0.0 : sum / static_cast<double>(count);
  return {std::min(v, kBelowOne), false};
}

MatchScore match_node(const StlNode& p, const StlNode& r, const MatchConfig& cfg);

// Optimal assignment of predicted children onto reference children. Rows are
// predicted children, the bitmask tracks which reference children are taken.
MatchScore match_commutative(std::span<const StlNode> pred,
                             std::span<const StlNode> ref,
                             const MatchConfig& cfg) {
  if (pred.size() > kMaxCommutativeArity || ref.size() > kMaxCommutativeArity) {
    throw MatchError("commutative node with more than " +
                     std::to_string(kMaxCommutativeArity) + " children");
  }
  const std::size_t n = pred.size();
  const std::size_t m = ref.size();
  std::vector<std::vector<MatchScore>> s(n, std::vector<MatchScore>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) s[i][j] = match_node(pred[i], ref[j], cfg);

  // best[i][mask]: highest total over the first i rows using reference
  // children `mask`. perfect[i][mask]: reachable with every row matched
  // exactly.
  const std::size_t states = std::size_t{1} << m;
  constexpr double kUnreachable = -1.0;
  constexpr int kSkip = -1;
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(states, kUnreachable));
  std::vector<std::vector<int>> choice(n + 1, std::vector<int>(states, kSkip));
  std::vector<std::vector<char>> perfect(n + 1, std::vector<char>(states, 0));
  best[0][0] = 0.0;
  perfect[0][0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t mask = 0; mask < states; ++mask) {
      if (best[i][mask] < 0.0) continue;
      if (best[i][mask] > best[i + 1][mask]) {
        best[i + 1][mask] = best[i][mask];
        choice[i + 1][mask] = kSkip;
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (mask & (std::size_t{1} << j)) continue;
        const std::size_t to = mask | (std::size_t{1} << j);
        const double v = best[i][mask] + s[i][j].value;
        if (v > best[i + 1][to]) {
          best[i + 1][to] = v;
          choice[i + 1][to] = static_cast<int>(j);
        }
        if (perfect[i][mask] && s[i][j].exact) perfect[i + 1][to] = 1;
      }
    }
  }
  if (n == m && perfect[n][states - 1]) return {1.0, true};

  std::size_t mask = static_cast<std::size_t>(
      std::max_element(best[n].begin(), best[n].end()) - best[n].begin());
  // Sum the chosen pair scores in sorted order so the result does not depend
  // on how the children happen to be ordered.
  std::vector<double> chosen;
  for (std::size_t i = n; i > 0; --i) {
    const int j = choice[i][mask];
    if (j == kSkip) continue;
    chosen.push_back(s[i - 1][static_cast<std::size_t>(j)].value);
    mask &= ~(std::size_t{1} << j);
  }
  std::sort(chosen.begin(), chosen.end());
  double total = 0.0;
  for (double v : chosen) total += v;
  return finish(total, std::max(n, m), false);
}

MatchScore match_node(const StlNode& p, const StlNode& r, const MatchConfig& cfg) {
  if (p.op() != r.op()) return {0.0, false};
  const double tol = cfg.numeric_tolerance;

  if (p.op() == Op::True) return {1.0, true};
  if (p.op() == Op::Atom) {
    const Predicate& a = *p.predicate();
    const Predicate& b = *r.predicate();
    const bool ok = a.signal == b.signal && a.comparator == b.comparator &&
                    close(a.threshold, b.threshold, tol);
    return ok ? MatchScore{1.0, true} : MatchScore{0.0, false};
  }
  if (p.time()) {
    if (!close(p.time()->lo, r.time()->lo, tol) ||
        !close(p.time()->hi, r.time()->hi, tol)) {
      return {0.0, false};
    }
  }

  if (is_nary(p.op()) && cfg.is_commutative(p.op())) {
    return match_commutative(p.children(), r.children(), cfg);
  }

  const auto pred_ops = p.operands();
  const auto ref_ops = r.operands();
  const std::size_t common = std::min(pred_ops.size(), ref_ops.size());
  double sum = 0.0;
  bool exact = pred_ops.size() == ref_ops.size();
  for (std::size_t i = 0; i < common; ++i) {
    const MatchScore c = match_node(*pred_ops[i], *ref_ops[i], cfg);
    sum += c.value;
    exact = exact && c.exact;
  }
  return finish(sum, std::max(pred_ops.size(), ref_ops.size()), exact);
}

}  // namespace

MatchScore tree_match(const StlNode& predicted, const StlNode& reference,
                      const MatchConfig& cfg) {
  return match_node(predicted, reference, cfg);
}

StlNode mask_tree(const StlNode& node) {
  StlNode::Parts parts;
  parts.op = node.op();
  if (node.time()) parts.time = Interval{0.0, 0.0};
  if (node.predicate()) parts.predicate = Predicate{"__P__", Comparator::Gt, 0.0};
  if (node.left()) parts.left = mask_tree(*node.left());
  if (node.right()) parts.right = mask_tree(*node.right());
  for (const StlNode& c : node.children()) parts.children.push_back(mask_tree(c));
  return StlNode::make(std::move(parts));
}

SampleMatch match_prediction(std::string_view raw_output,
                             const StlNode& reference, const MatchConfig& cfg) {
  SampleMatch out;
  std::optional<StlNode> predicted;
  try {
    predicted = parse_stl_json(raw_output);
  } catch (const SchemaError& e) {
    out.error = std::string(to_string(e.kind())) + ": " + e.what();
    return out;
  }
  out.valid = true;
  try {
    const MatchScore full = tree_match(*predicted, reference, cfg);
    out.score = full.value;
    out.formula_match = full.exact;
    out.skeleton_match =
        tree_match(mask_tree(*predicted), mask_tree(reference), cfg).exact;
  } catch (const MatchError& e) {
    out.error = e.what();
  }
  return out;
}

MetricsReport compute_metrics(std::span<const PredictionPair> pairs,
                              const MatchConfig& cfg) {
  MetricsReport report;
  report.per_sample.reserve(pairs.size());
  std::size_t skeleton = 0;
  std::size_t formula = 0;
  for (const auto& [raw, ref] : pairs) {
    report.per_sample.push_back(match_prediction(raw, ref, cfg));
    const SampleMatch& m = report.per_sample.back();
    skeleton += m.valid && m.skeleton_match;
    formula += m.valid && m.formula_match;
  }
  if (!pairs.empty()) {
    const double n = static_cast<double>(pairs.size());
    report.format_accuracy = static_cast<double>(skeleton) / n;
    report.formula_accuracy = static_cast<double>(formula) / n;
  }
  return report;
}

double format_accuracy(std::span<const PredictionPair> pairs,
                       const MatchConfig& cfg) {
  return compute_metrics(pairs, cfg).format_accuracy;
}

double formula_accuracy(std::span<const PredictionPair> pairs,
                        const MatchConfig& cfg) {
  return compute_metrics(pairs, cfg).formula_accuracy;
}

}  // namespace stlforge
