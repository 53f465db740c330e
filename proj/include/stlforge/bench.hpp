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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stlforge/ast.hpp"
#include "stlforge/tools.hpp"

namespace stlforge {

inline constexpr std::array<std::string_view, 6> kDomains = {
    "autonomous_driving",       "robotics",           "industrial_control",
    "environmental_monitoring", "electrical_systems", "aerospace_systems"};

struct Scenario {
  std::string_view domain;
  std::string_view name;
};

/// The 33 benchmark scenarios, grouped by domain.
extern const std::array<Scenario, 33> kScenarios;

std::optional<std::string_view> domain_of_scenario(std::string_view scenario);

enum class TargetField { Time, Threshold };

struct ToolAnnotation {
  std::string tool;
  nlohmann::json args = nlohmann::json::object();
  double expected_output = 0.0;
  TargetField target = TargetField::Time;
};

enum class Split { Unassigned, Train, Val, Test };

std::string_view to_string(Split s) noexcept;

struct Sample {
  std::string id;
  std::string language;  // "en" or "zh"
  std::string domain;
  std::string scenario;
  std::string nl_text;
  StlNode reference = StlNode::truth();
  int complexity = 1;
  std::vector<ToolAnnotation> tool_annotations;
  Split split = Split::Unassigned;
};

/// Violation kinds reported by validate_sample, in checklist order.
enum class ViolationKind {
  NlLength,
  JsonSyntax,
  MissingField,
  BadArity,
  BadInterval,
  BadPredicate,
  UnknownSignal,
  BadLanguage,
  BadDomain,
  BadScenario,
  BadComplexity,
  ToolNotExecutable,
  UnitConversionMismatch,
  ArithmeticMismatch,
  ToolOutputMismatch,
  ToolFormulaMismatch,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string detail;
};

inline constexpr std::size_t kMinNlLength = 10;
inline constexpr std::size_t kMaxNlLength = 400;

/// One dataset line. A line that does not decode yields an empty optional
/// together with the violations explaining why.
struct SampleRecord {
  std::optional<Sample> sample;
  std::string id;  // best effort, from the raw line
  std::vector<Violation> violations;
};

/// Decodes and validates one JSONL line.
SampleRecord read_sample_line(std::string_view line, double tolerance = 0.1);

/// Full checklist on an already decoded sample. Empty means valid.
std::vector<Violation> validate_sample(const Sample& s, double tolerance = 0.1);

Sample sample_from_json(const nlohmann::json& j);
nlohmann::ordered_json sample_to_json(const Sample& s);

/// Reads every non-blank line as a Sample. Throws SchemaError or
/// std::runtime_error naming the line on the first bad record.
std::vector<Sample> read_samples_jsonl(std::string_view text);
std::string write_samples_jsonl(std::span<const Sample> samples);

/// Lowercase, collapse whitespace runs, trim.
std::string normalize_nl(std::string_view text);

/// Drops later samples whose normalized text or canonical tree (including
/// every predicate) equals an earlier one. Stable.
std::vector<Sample> symbolic_dedup(std::span<const Sample> samples);

/// Near-duplicate retention given externally computed clusters of sample
/// indices: each cluster keeps its highest-complexity member (the earliest
/// on ties). Indices outside any cluster are kept. Order is preserved.
std::vector<Sample> prune_clusters(std::span<const Sample> samples,
                                   std::span<const std::vector<std::size_t>> clusters);

enum class SplitMode { Standard, ScenarioHeldOut };

/// Tool-use stratum of a sample: "none" or the sorted, '+'-joined tool set.
std::string tool_use_type(const Sample& s);

/// Returns one split per input sample. Standard mode stratifies over
/// (language, domain, complexity, tool-use type) at 8:1:1. Held-out mode
/// sends the listed scenarios to val/test only and splits the rest 8:1:1;
/// throws ConfigError if that leaves some domain without training data or a
/// listed scenario is unknown.
std::vector<Split> make_splits(std::span<const Sample> samples, SplitMode mode,
                               std::uint64_t seed,
                               std::span<const std::string> held_out = {});

// ---------------------------------------------------------------------------
// Template-driven generation

struct SignalRange {
  std::string signal;
  double min = 0.0;
  double max = 0.0;
  std::string unit;  // unit of the canonical threshold, optional
  std::vector<std::string> alt_units;  // surface units that need convert_unit
};

struct TemplateSpec {
  std::string domain;
  std::string scenario;
  std::vector<SignalRange> signals;
  std::vector<Op> operators;  // admissible operators
  Interval horizon{0, 3600};  // admissible range for interval bounds, in seconds
  std::vector<std::string> tools;  // tools that may be annotated
  std::vector<std::string> languages{"en", "zh"};
  std::vector<int> complexity_levels{1, 2, 3, 4, 5, 6};
  std::array<double, 6> level_weights{25, 25, 20, 15, 10, 5};
  bool allow_edges = false;  // Rise/Fall permitted only when explicitly enabled
};

/// Reads a TemplateSpec document (JSON). Throws ConfigError.
TemplateSpec template_from_json(const nlohmann::json& j);

/// Deterministic for a given (spec, count, seed). Every sample passes
/// validate_sample. Throws ConfigError on empty admissible ranges.
std::vector<Sample> generate_samples(const TemplateSpec& spec, std::size_t count,
                                     std::uint64_t seed);

}  // namespace stlforge
