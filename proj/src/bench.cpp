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

#include "stlforge/bench.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "stlforge/ast_json.hpp"
#include "stlforge/matcher.hpp"
#include "stlforge/vocabulary.hpp"

namespace stlforge {

const std::array<Scenario, 33> kScenarios = {{
    {"autonomous_driving", "AEB"},
    {"autonomous_driving", "ACC"},
    {"autonomous_driving", "lane keeping"},
    {"autonomous_driving", "parking"},
    {"autonomous_driving", "fuel monitoring"},
    {"autonomous_driving", "traction control"},
    {"robotics", "pick-and-place"},
    {"robotics", "welding"},
    {"robotics", "collision avoidance"},
    {"robotics", "assembly"},
    {"robotics", "mobile navigation"},
    {"industrial_control", "reactor control"},
    {"industrial_control", "CNC machining"},
    {"industrial_control", "conveyor belt"},
    {"industrial_control", "hydraulic press"},
    {"industrial_control", "boiler system"},
    {"industrial_control", "structural monitoring"},
    {"environmental_monitoring", "indoor climate"},
    {"environmental_monitoring", "water quality"},
    {"environmental_monitoring", "air quality"},
    {"environmental_monitoring", "greenhouse"},
    {"environmental_monitoring", "noise monitoring"},
    {"electrical_systems", "battery management"},
    {"electrical_systems", "motor drive"},
    {"electrical_systems", "power grid"},
    {"electrical_systems", "solar panel"},
    {"electrical_systems", "signal processing"},
    {"aerospace_systems", "altitude hold"},
    {"aerospace_systems", "takeoff landing"},
    {"aerospace_systems", "drone survey"},
    {"aerospace_systems", "satellite attitude"},
    {"aerospace_systems", "flight envelope"},
    {"aerospace_systems", "UAV delivery"},
}};

std::optional<std::string_view> domain_of_scenario(std::string_view scenario) {
  for (const Scenario& s : kScenarios) {
    if (s.name == scenario) return s.domain;
  }
  return std::nullopt;
}

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Unassigned: return "";
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "";
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::NlLength: return "NlLength";
    case ViolationKind::JsonSyntax: return "JsonSyntax";
    case ViolationKind::MissingField: return "MissingField";
    case ViolationKind::BadArity: return "BadArity";
    case ViolationKind::BadInterval: return "BadInterval";
    case ViolationKind::BadPredicate: return "BadPredicate";
    case ViolationKind::UnknownSignal: return "UnknownSignal";
    case ViolationKind::BadLanguage: return "BadLanguage";
    case ViolationKind::BadDomain: return "BadDomain";
    case ViolationKind::BadScenario: return "BadScenario";
    case ViolationKind::BadComplexity: return "BadComplexity";
    case ViolationKind::ToolNotExecutable: return "ToolNotExecutable";
    case ViolationKind::UnitConversionMismatch: return "UnitConversionMismatch";
    case ViolationKind::ArithmeticMismatch: return "ArithmeticMismatch";
    case ViolationKind::ToolOutputMismatch: return "ToolOutputMismatch";
    case ViolationKind::ToolFormulaMismatch: return "ToolFormulaMismatch";
  }
  return "?";
}

namespace {

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

ViolationKind from_schema(SchemaErrc e) {
  switch (e) {
    case SchemaErrc::Json: return ViolationKind::JsonSyntax;
    case SchemaErrc::MissingField: return ViolationKind::MissingField;
    case SchemaErrc::BadArity: return ViolationKind::BadArity;
    case SchemaErrc::BadInterval: return ViolationKind::BadInterval;
    case SchemaErrc::BadPredicate: return ViolationKind::BadPredicate;
  }
  return ViolationKind::JsonSyntax;
}

std::optional<TargetField> target_from_name(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "time") return TargetField::Time;
  if (lower == "threshold") return TargetField::Threshold;
  return std::nullopt;
}

std::string_view target_name(TargetField f) {
  return f == TargetField::Time ? "Time" : "threshold";
}

Split split_from_name(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val" || s == "validation") return Split::Val;
  if (s == "test") return Split::Test;
  if (s.empty()) return Split::Unassigned;
  throw SchemaError(SchemaErrc::MissingField, "unknown split '" + std::string(s) + "'");
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    throw SchemaError(SchemaErrc::MissingField, std::string("sample field '") + key + "' is missing");
  }
  return *it;
}

std::string require_string(const nlohmann::json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_string()) {
    throw SchemaError(SchemaErrc::MissingField, std::string("sample field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

bool near(double a, double b, double tol) { return within_tolerance(a, b, tol); }

void check_intervals(const StlNode& n, std::vector<Violation>& out) {
  if (const auto& t = n.time()) {
    if (t->lo != std::floor(t->lo) || t->hi != std::floor(t->hi)) {
      out.push_back({ViolationKind::BadInterval,
                     "interval [" + format_decimal(t->lo) + ", " + format_decimal(t->hi) +
                         "] has non-integer bounds"});
    }
  }
  for (const StlNode* c : n.operands()) check_intervals(*c, out);
}

}  // namespace

Sample sample_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError(SchemaErrc::Json, "sample must be a JSON object");
  Sample s;
  s.id = require(j, "id").is_string() ? j["id"].get<std::string>() : j["id"].dump();
  s.language = require_string(j, "language");
  s.domain = require_string(j, "domain");
  s.scenario = require_string(j, "scenario");
  s.nl_text = require_string(j, "nl_text");
  const auto& ref = require(j, "reference");
  s.reference = ref.is_string() ? parse_stl_json(ref.get<std::string>()) : stl_from_json(ref);
  const auto& cx = require(j, "complexity");
  if (!cx.is_number_integer()) {
    throw SchemaError(SchemaErrc::MissingField, "sample field 'complexity' must be an integer");
  }
  s.complexity = cx.get<int>();
  if (auto it = j.find("tool_annotations"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw SchemaError(SchemaErrc::MissingField, "'tool_annotations' must be a list");
    }
    for (const auto& a : *it) {
      if (!a.is_object()) throw SchemaError(SchemaErrc::MissingField, "tool annotation must be an object");
      ToolAnnotation t;
      t.tool = require_string(a, "tool");
      t.args = require(a, "args");
      const auto& out = require(a, "expected_output");
      if (!out.is_number()) {
        throw SchemaError(SchemaErrc::MissingField, "'expected_output' must be a number");
      }
      t.expected_output = out.get<double>();
      const auto target = target_from_name(require_string(a, "target_field"));
      if (!target) throw SchemaError(SchemaErrc::MissingField, "'target_field' must be Time or threshold");
      t.target = *target;
      s.tool_annotations.push_back(std::move(t));
    }
  }
  if (auto it = j.find("split"); it != j.end() && it->is_string()) {
    s.split = split_from_name(it->get<std::string>());
  }
  return s;
}

nlohmann::ordered_json sample_to_json(const Sample& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["language"] = s.language;
  j["domain"] = s.domain;
  j["scenario"] = s.scenario;
  j["nl_text"] = s.nl_text;
  j["reference"] = stl_to_json(s.reference);
  j["complexity"] = s.complexity;
  auto tools = nlohmann::ordered_json::array();
  for (const ToolAnnotation& t : s.tool_annotations) {
    nlohmann::ordered_json a;
    a["tool"] = t.tool;
    a["args"] = nlohmann::ordered_json::parse(t.args.dump());
    if (t.expected_output == std::floor(t.expected_output) && std::fabs(t.expected_output) < 1e15) {
      a["expected_output"] = static_cast<long long>(t.expected_output);
    } else {
      a["expected_output"] = t.expected_output;
    }
    a["target_field"] = target_name(t.target);
    tools.push_back(std::move(a));
  }
  j["tool_annotations"] = std::move(tools);
  if (s.split != Split::Unassigned) j["split"] = to_string(s.split);
  return j;
}

std::vector<Violation> validate_sample(const Sample& s, double tolerance) {
  std::vector<Violation> out;
  const std::size_t len = code_points(s.nl_text);
  if (len < kMinNlLength || len > kMaxNlLength) {
    out.push_back({ViolationKind::NlLength, "text has " + std::to_string(len) +
                                                " characters, expected " +
                                                std::to_string(kMinNlLength) + "-" +
                                                std::to_string(kMaxNlLength)});
  }
  check_intervals(s.reference, out);
  const auto& vocab = SignalVocabulary::standard();
  std::set<std::string> unknown;
  for (const Predicate& p : collect_predicates(s.reference)) {
    if (!vocab.is_canonical(p.signal)) unknown.insert(p.signal);
  }
  for (const std::string& name : unknown) {
    out.push_back({ViolationKind::UnknownSignal, "signal '" + name + "' is not in the vocabulary"});
  }
  if (s.language != "en" && s.language != "zh") {
    out.push_back({ViolationKind::BadLanguage, "language '" + s.language + "'"});
  }
  const bool domain_ok = std::find(kDomains.begin(), kDomains.end(), s.domain) != kDomains.end();
  if (!domain_ok) out.push_back({ViolationKind::BadDomain, "domain '" + s.domain + "'"});
  const auto scenario_domain = domain_of_scenario(s.scenario);
  if (!scenario_domain) {
    out.push_back({ViolationKind::BadScenario, "scenario '" + s.scenario + "'"});
  } else if (domain_ok && *scenario_domain != s.domain) {
    out.push_back({ViolationKind::BadScenario, "scenario '" + s.scenario + "' belongs to " +
                                                   std::string(*scenario_domain)});
  }
  if (s.complexity < 1 || s.complexity > 6) {
    out.push_back({ViolationKind::BadComplexity, "complexity " + std::to_string(s.complexity)});
  }

  const NumericFields fields = collect_numeric_fields(s.reference);
  for (const ToolAnnotation& a : s.tool_annotations) {
    const auto tool = tool_from_name(a.tool);
    if (!tool) {
      out.push_back({ViolationKind::ToolNotExecutable, "unknown tool '" + a.tool + "'"});
      continue;
    }
    const ToolCall call{a.tool, a.args};
    if (auto problem = check_arguments(call)) {
      out.push_back({ViolationKind::ToolNotExecutable, a.tool + ": " + *problem});
      continue;
    }
    const ToolResult r = execute(call);
    if (!r.ok) {
      out.push_back({ViolationKind::ToolNotExecutable, a.tool + ": " + r.error_detail.value_or("")});
      continue;
    }
    if (!near(a.expected_output, r.value, tolerance) &&
        !near(a.expected_output, r.raw_value, tolerance)) {
      const ViolationKind kind = *tool == ToolName::ConvertUnit    ? ViolationKind::UnitConversionMismatch
                                 : *tool == ToolName::EvalMathExpr ? ViolationKind::ArithmeticMismatch
                                                                   : ViolationKind::ToolOutputMismatch;
      out.push_back({kind, a.tool + " returns " + format_decimal(r.value) + ", annotation says " +
                               format_decimal(a.expected_output)});
      continue;
    }
    const auto& values = a.target == TargetField::Time ? fields.time_bounds : fields.thresholds;
    const bool used = std::any_of(values.begin(), values.end(), [&](double v) {
      return near(v, a.expected_output, tolerance);
    });
    if (!used) {
      out.push_back({ViolationKind::ToolFormulaMismatch,
                     a.tool + " output " + format_decimal(a.expected_output) + " not found in any " +
                         std::string(target_name(a.target)) + " field"});
    }
  }
  return out;
}

SampleRecord read_sample_line(std::string_view line, double tolerance) {
  SampleRecord rec;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    rec.violations.push_back({ViolationKind::JsonSyntax, e.what()});
    return rec;
  }
  if (j.is_object() && j.contains("id")) {
    rec.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  }
  try {
    rec.sample = sample_from_json(j);
  } catch (const SchemaError& e) {
    rec.violations.push_back({from_schema(e.kind()), e.what()});
    return rec;
  }
  rec.violations = validate_sample(*rec.sample, tolerance);
  return rec;
}

std::vector<Sample> read_samples_jsonl(std::string_view text) {
  std::vector<Sample> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    try {
      out.push_back(sample_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(SchemaErrc::Json, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string write_samples_jsonl(std::span<const Sample> samples) {
  std::string out;
  for (const Sample& s : samples) {
    out += sample_to_json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
    out += '\n';
  }
  return out;
}

std::string normalize_nl(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<Sample> symbolic_dedup(std::span<const Sample> samples) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    auto key = std::make_pair(normalize_nl(s.nl_text), serialize_stl_json(canonicalize(s.reference)));
    if (seen.insert(std::move(key)).second) out.push_back(s);
  }
  return out;
}

std::vector<Sample> prune_clusters(std::span<const Sample> samples,
                                   std::span<const std::vector<std::size_t>> clusters) {
  std::vector<bool> keep(samples.size(), true);
  for (const auto& cluster : clusters) {
    std::optional<std::size_t> best;
    for (std::size_t i : cluster) {
      if (i >= samples.size()) throw ConfigError("cluster index " + std::to_string(i) + " out of range");
      if (!best || samples[i].complexity > samples[*best].complexity ||
          (samples[i].complexity == samples[*best].complexity && i < *best)) {
        best = i;
      }
    }
    for (std::size_t i : cluster) keep[i] = (i == *best);
  }
  std::vector<Sample> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (keep[i]) out.push_back(samples[i]);
  }
  return out;
}

std::string tool_use_type(const Sample& s) {
  std::set<std::string> tools;
  for (const ToolAnnotation& a : s.tool_annotations) tools.insert(a.tool);
  if (tools.empty()) return "none";
  std::string out;
  for (const std::string& t : tools) {
    if (!out.empty()) out += '+';
    out += t;
  }
  return out;
}

namespace {

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng() % i]);
  }
}

// Strata in key order, members shuffled; a global position counter then
// deals out train/val/test in a fixed 10-slot cycle so that every prefix of
// the deal is as close to 8:1:1 as possible.
void stratified_deal(std::span<const Sample> samples, const std::vector<std::size_t>& pool,
                     std::mt19937_64& rng, std::vector<Split>& out) {
  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i : pool) {
    const Sample& s = samples[i];
    strata[s.language + '\x1f' + s.domain + '\x1f' + std::to_string(s.complexity) + '\x1f' +
           tool_use_type(s)]
        .push_back(i);
  }
  std::size_t position = 0;
  for (auto& [key, members] : strata) {
    shuffle(members, rng);
    for (std::size_t i : members) {
      const std::size_t slot = position++ % 10;
      out[i] = slot == 4 ? Split::Val : slot == 9 ? Split::Test : Split::Train;
    }
  }
}

}  // namespace

std::vector<Split> make_splits(std::span<const Sample> samples, SplitMode mode,
                               std::uint64_t seed, std::span<const std::string> held_out) {
  std::mt19937_64 rng(seed);
  std::vector<Split> out(samples.size(), Split::Unassigned);
  std::vector<std::size_t> pool;
  if (mode == SplitMode::Standard) {
    for (std::size_t i = 0; i < samples.size(); ++i) pool.push_back(i);
    stratified_deal(samples, pool, rng, out);
    return out;
  }

  std::set<std::string, std::less<>> held;
  for (const std::string& name : held_out) {
    if (!domain_of_scenario(name)) throw ConfigError("unknown held-out scenario '" + name + "'");
    held.insert(name);
  }
  std::vector<std::size_t> held_idx;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (held.count(samples[i].scenario) ? held_idx : pool).push_back(i);
  }
  stratified_deal(samples, pool, rng, out);
  shuffle(held_idx, rng);
  for (std::size_t k = 0; k < held_idx.size(); ++k) {
    out[held_idx[k]] = k % 2 == 0 ? Split::Val : Split::Test;
  }

  std::set<std::string> domains, trained;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    domains.insert(samples[i].domain);
    if (out[i] == Split::Train) trained.insert(samples[i].domain);
  }
  for (const std::string& d : domains) {
    if (!trained.count(d)) {
      throw ConfigError("held-out scenarios leave domain '" + d + "' without training samples");
    }
  }
  return out;
}

}  // namespace stlforge
