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

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stlforge/ast.hpp"

namespace stlforge {

inline constexpr double kDefaultTolerance = 0.1;

/// Largest and/or arity for which the optimal child alignment is searched.
inline constexpr std::size_t kMaxCommutativeArity = 8;

/// |a - b| <= tol, judged on the decimal values the operands stand for: the
/// comparison absorbs a few ulps of binary rounding so that 1.1 vs 1.0 sits
/// inside a 0.1 tolerance while 1.100001 does not.
bool within_tolerance(double a, double b, double tol) noexcept;

struct MatchConfig {
  double numeric_tolerance = kDefaultTolerance;
  std::vector<Op> commutative_ops = {Op::And, Op::Or};

  bool is_commutative(Op op) const;
};

/// Similarity in [0, 1]; `exact` is set iff value == 1.
struct MatchScore {
  double value = 0.0;
  bool exact = false;
};

/// Thrown when an and/or node exceeds kMaxCommutativeArity.
class MatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Top-down recursive comparison. A node whose operator kind or interval
/// differs from the reference scores 0 together with its subtree; atoms match
/// on signal, comparator and threshold within tolerance. Matching internal
/// nodes score the mean of their operand scores. Commutative children are
/// aligned by an optimal assignment; unmatched children count 0 and the
/// mean is taken over the larger arity.
MatchScore tree_match(const StlNode& predicted, const StlNode& reference,
                      const MatchConfig& cfg = {});

/// Skeleton of a tree: every predicate becomes the placeholder atom
/// `__P__>0.0`, every interval becomes [0, 0]. Operator kinds and shape stay.
StlNode mask_tree(const StlNode& node);

/// Outcome of scoring one raw model output against a reference.
struct SampleMatch {
  bool valid = false;           // parsed into a well-formed tree
  bool skeleton_match = false;  // masked trees match exactly
  bool formula_match = false;   // full trees match exactly
  double score = 0.0;           // tree_match value, 0 when invalid
  std::string error;            // parse failure detail, if any
};

SampleMatch match_prediction(std::string_view raw_output,
                             const StlNode& reference,
                             const MatchConfig& cfg = {});

using PredictionPair = std::pair<std::string, StlNode>;

/// Fraction of pairs whose output parses and whose skeleton matches.
double format_accuracy(std::span<const PredictionPair> pairs,
                       const MatchConfig& cfg = {});

/// Fraction of pairs whose output parses and matches the reference exactly.
double formula_accuracy(std::span<const PredictionPair> pairs,
                        const MatchConfig& cfg = {});

struct MetricsReport {
  double format_accuracy = 0.0;
  double formula_accuracy = 0.0;
  std::vector<SampleMatch> per_sample;
};

/// Both metrics plus the per-sample verdicts in input order.
MetricsReport compute_metrics(std::span<const PredictionPair> pairs,
                              const MatchConfig& cfg = {});

}  // namespace stlforge
