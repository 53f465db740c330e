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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stlforge/ast.hpp"

namespace stlforge {

/// A finite discrete-time trace s_0..s_T. One sample is one time unit, so
/// formula windows index samples directly.
class Trace {
 public:
  /// Throws EvalError(BadTrace) when the map is empty, a column is empty, or
  /// column lengths differ.
  explicit Trace(std::map<std::string, std::vector<double>> signals);

  std::size_t length() const noexcept { return length_; }
  bool has_signal(std::string_view name) const;
  /// Throws EvalError(UnknownSignal).
  std::span<const double> signal(std::string_view name) const;
  const std::map<std::string, std::vector<double>, std::less<>>& signals()
      const noexcept {
    return signals_;
  }

 private:
  std::map<std::string, std::vector<double>, std::less<>> signals_;
  std::size_t length_ = 0;
};

/// CSV with a header row of signal names and one row per sample.
Trace parse_trace_csv(std::string_view text);
/// JSON object `{signal: [samples]}`.
Trace parse_trace_json(std::string_view text);
/// Dispatches on the extension (.csv, otherwise JSON). Throws EvalError
/// (BadTrace) on unreadable or malformed files.
Trace load_trace(const std::string& path);

/// Absolute tolerance used by the `==` comparator.
inline constexpr double kEqualityTolerance = 1e-9;

bool holds(const Predicate& p, double sample) noexcept;

/// Satisfaction of `formula` at every index 0..T, computed bottom-up.
/// Throws EvalError(UnknownSignal) if the formula references a signal the
/// trace lacks.
std::vector<bool> evaluate_all(const StlNode& formula, const Trace& trace);

/// (s, k) |= formula. Windows are intersected with [0, T]: an empty window
/// makes existential operators false and universal ones true. Rise and Fall
/// are false at k = 0. Throws EvalError(IndexOutOfRange) for k > T.
bool satisfies(const StlNode& formula, const Trace& trace, std::size_t k);

/// s |= formula, i.e. satisfaction at index 0.
bool satisfies_trace(const StlNode& formula, const Trace& trace);

}  // namespace stlforge
