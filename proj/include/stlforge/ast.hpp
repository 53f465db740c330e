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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stlforge/error.hpp"

namespace stlforge {

/// Operator kinds of a structured STL tree. `True` is the constant ⊤ leaf;
/// it is written on the wire as the bare leaf string "true".
enum class Op {
  Globally,
  Finally,
  Until,
  Since,
  Historically,
  Once,
  Rise,
  Fall,
  Imply,
  And,
  Or,
  Not,
  Atom,
  True,
};

inline constexpr std::array<Op, 14> kAllOps = {
    Op::Globally, Op::Finally, Op::Until, Op::Since, Op::Historically,
    Op::Once,     Op::Rise,    Op::Fall,  Op::Imply, Op::And,
    Op::Or,       Op::Not,     Op::Atom,  Op::True};

/// Wire spelling of an operator ("Finally", "and", "imply", ...).
std::string_view op_name(Op op) noexcept;

/// Resolves an operator spelling, case-insensitively, including the common
/// aliases (G/always, F/eventually, U, S, H, O, implies, &&, ||, !).
std::optional<Op> op_from_name(std::string_view name);

bool is_temporal(Op op) noexcept;         // carries a Time interval
bool is_unary_temporal(Op op) noexcept;   // Globally, Finally, Historically, Once
bool is_binary_temporal(Op op) noexcept;  // Until, Since
bool is_nary(Op op) noexcept;             // and, or

enum class Comparator { Gt, Ge, Lt, Le, Eq };

std::string_view comparator_symbol(Comparator c) noexcept;

/// Closed time window [lo, hi] in trace samples (seconds).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const Interval&) const = default;
};

/// Atomic constraint `signal <comparator> threshold`.
struct Predicate {
  std::string signal;
  Comparator comparator = Comparator::Gt;
  double threshold = 0.0;

  bool operator==(const Predicate&) const = default;
};

/// Parses `altitude>3048.0`, `velocity >= 3`, ... The comparator is the
/// longest match among >=, <=, ==, >, < at the first comparator character.
/// Throws SchemaError(BadPredicate) with the failing position.
Predicate parse_predicate(std::string_view text);

/// Normalized leaf string: no whitespace, threshold with a decimal point.
std::string format_predicate(const Predicate& p);

/// Shortest round-trip fixed-notation rendering that always contains '.'.
std::string format_decimal(double value);

struct StlNodeParts;

/// One node of an STL tree. Nodes are immutable once built; subtrees are
/// shared, so copies are cheap. Every factory enforces the shape rules:
///
///   Globally/Finally/Historically/Once  time + right
///   Until/Since                         time + left + right
///   imply                               left + right
///   Not                                 right
///   Rise/Fall                           right, which must be an Atom
///   and/or                              >= 2 children
///   Atom                                predicate
///   True                                nothing
class StlNode {
 public:
  using Parts = StlNodeParts;

  /// Builds a node from arbitrary parts. Throws SchemaError(BadArity) when the
  /// shape does not match `op`, SchemaError(BadInterval) on a bad window.
  static StlNode make(Parts parts);

  static StlNode atom(Predicate p);
  static StlNode atom(std::string_view predicate_text);
  static StlNode truth();
  static StlNode temporal(Op op, Interval time, StlNode child);
  static StlNode until(Interval time, StlNode left, StlNode right);
  static StlNode since(Interval time, StlNode left, StlNode right);
  static StlNode imply(StlNode condition, StlNode consequent);
  static StlNode negate(StlNode child);
  static StlNode rise(StlNode atom);
  static StlNode fall(StlNode atom);
  static StlNode conj(std::vector<StlNode> children);
  static StlNode disj(std::vector<StlNode> children);

  Op op() const noexcept { return op_; }
  const std::optional<Interval>& time() const noexcept { return time_; }
  const StlNode* left() const noexcept { return left_.get(); }
  const StlNode* right() const noexcept { return right_.get(); }
  std::span<const StlNode> children() const noexcept { return children_; }
  const std::optional<Predicate>& predicate() const noexcept {
    return predicate_;
  }

  /// Operands in evaluation order: left then right, or the n-ary children.
  std::vector<const StlNode*> operands() const;

  /// Deep structural equality (exact numbers, ordered children).
  friend bool operator==(const StlNode& a, const StlNode& b);

  std::size_t depth() const;
  std::size_t operator_count() const;
  std::size_t predicate_count() const;

 private:
  StlNode() = default;

  Op op_ = Op::True;
  std::optional<Interval> time_;
  std::shared_ptr<const StlNode> left_;
  std::shared_ptr<const StlNode> right_;
  std::vector<StlNode> children_;
  std::optional<Predicate> predicate_;
};

/// Loose bag of fields, validated by StlNode::make.
struct StlNodeParts {
  Op op = Op::True;
  std::optional<Interval> time{};
  std::optional<StlNode> left{};
  std::optional<StlNode> right{};
  std::vector<StlNode> children{};
  std::optional<Predicate> predicate{};
};

/// Parses `{"STL": ...}` text into a canonical tree. A bare predicate string
/// is accepted anywhere a node is expected, including as the root.
StlNode parse_stl_json(std::string_view text);

/// Compact wire form: `{"STL":...}` with fields in the order Operation,
/// Time, Leftaction, Rightaction, SubQueries. Atoms are leaf strings, the
/// root included.
std::string serialize_stl_json(const StlNode& node);

/// Maps signal aliases onto the canonical vocabulary and normalizes numeric
/// fields (-0.0 becomes 0.0). Structure is preserved; idempotent.
StlNode canonicalize(const StlNode& node);

/// Debug view, e.g. `F[0,1800](and(altitude>3048.0, speed>=102.89))`.
std::string to_string(const StlNode& node);

/// Every interval bound and predicate threshold in the tree, pre-order.
struct NumericFields {
  std::vector<double> time_bounds;
  std::vector<double> thresholds;
};
NumericFields collect_numeric_fields(const StlNode& node);

/// All atoms in the tree, pre-order.
std::vector<Predicate> collect_predicates(const StlNode& node);

}  // namespace stlforge
