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

#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stlforge/ast_json.hpp"
#include "stlforge/bench.hpp"
#include "stlforge/matcher.hpp"
#include "stlforge/reward.hpp"
#include "stlforge/semantics.hpp"
#include "stlforge/tools.hpp"

namespace stlforge::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Operational failure: reported on stderr, exit 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  double tolerance = kDefaultTolerance;
  double tau = 0.5;
  double kappa = 0.3;
  std::size_t group_size = 8;
  std::size_t max_tool_rounds = kMaxToolRounds;
  std::uint64_t seed = 0;
  std::string format;  // "", "json" or "jsonl"
  std::string output;

  RewardConfig reward() const {
    RewardConfig c;
    c.tau = tau;
    c.kappa = kappa;
    c.tolerance = tolerance;
    c.group_size = group_size;
    c.max_tool_rounds = max_tool_rounds;
    c.validate();
    return c;
  }
  MatchConfig match() const {
    if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
    MatchConfig c;
    c.numeric_tolerance = tolerance;
    return c;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(line);
  }
  return out;
}

json parse_line(const std::string& line, std::size_t n, const std::string& path) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw IoError(path + ":" + std::to_string(n) + ": " + e.what());
  }
}

// Writes to --output when given, else to `out`.
class Sink {
 public:
  Sink(const Options& o, std::ostream& out) : out_(&out) {
    if (!o.output.empty()) {
      file_.open(o.output, std::ios::binary);
      if (!file_) throw IoError("cannot write '" + o.output + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

std::string id_of(const json& j) {
  if (!j.is_object() || !j.contains("id")) return {};
  return j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
}

// A reference given as a Sample, a {"STL": ...} document, STL JSON text, or
// the id of a dataset sample.
StlNode reference_of(const json& ref, const std::map<std::string, Sample>& dataset) {
  if (ref.is_object() && ref.contains("STL")) return stl_from_json(ref);
  if (ref.is_object()) return sample_from_json(ref).reference;
  if (ref.is_string()) {
    const std::string s = ref.get<std::string>();
    if (auto it = dataset.find(s); it != dataset.end()) return it->second.reference;
    return parse_stl_json(s);
  }
  throw SchemaError(SchemaErrc::MissingField, "reference must be a sample, an STL document or an id");
}

std::map<std::string, Sample> load_dataset(const std::string& path) {
  std::map<std::string, Sample> out;
  if (path.empty()) return out;
  for (Sample& s : read_samples_jsonl(read_file(path))) {
    std::string id = s.id;
    out.emplace(std::move(id), std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o, const std::string& path, std::ostream& out) {
  const auto lines = lines_of(read_file(path));
  ordered_json report;
  ordered_json violations = ordered_json::object();
  std::size_t valid = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const SampleRecord rec = read_sample_line(lines[i], o.tolerance);
    if (rec.violations.empty()) {
      ++valid;
      continue;
    }
    std::string id = rec.id.empty() ? "line:" + std::to_string(i + 1) : rec.id;
    auto list = ordered_json::array();
    for (const Violation& v : rec.violations) {
      list.push_back({{"kind", to_string(v.kind)}, {"detail", v.detail}});
    }
    violations[id] = std::move(list);
  }
  report["total"] = lines.size();
  report["valid"] = valid;
  report["invalid"] = lines.size() - valid;
  report["violations"] = std::move(violations);
  Sink sink(o, out);
  sink.stream() << report.dump(o.format == "jsonl" ? -1 : 2) << '\n';
  return valid == lines.size() ? kExitOk : kExitNegative;
}

int cmd_metrics(const Options& o, const std::string& pred_path, const std::string& ref_path,
                double min_formula, std::ostream& out) {
  std::map<std::string, StlNode> refs;
  if (!ref_path.empty()) {
    const auto lines = lines_of(read_file(ref_path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const json j = parse_line(lines[i], i + 1, ref_path);
      const std::string id = id_of(j);
      if (id.empty()) throw IoError(ref_path + ":" + std::to_string(i + 1) + ": record has no id");
      refs.emplace(id, reference_of(j.at("reference"), {}));
    }
  }
  std::vector<PredictionPair> pairs;
  const auto lines = lines_of(read_file(pred_path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const json j = parse_line(lines[i], i + 1, pred_path);
    std::string prediction;
    for (const char* key : {"prediction", "output"}) {
      if (j.contains(key)) {
        prediction = j[key].is_string() ? j[key].get<std::string>() : j[key].dump();
        break;
      }
    }
    if (j.contains("reference")) {
      pairs.emplace_back(prediction, reference_of(j["reference"], {}));
      continue;
    }
    const auto it = refs.find(id_of(j));
    if (it == refs.end()) {
      throw IoError(pred_path + ":" + std::to_string(i + 1) + ": no reference for id '" + id_of(j) + "'");
    }
    pairs.emplace_back(prediction, it->second);
  }
  const MetricsReport m = compute_metrics(pairs, o.match());
  ordered_json j;
  j["format_accuracy"] = m.format_accuracy;
  j["formula_accuracy"] = m.formula_accuracy;
  j["count"] = pairs.size();
  Sink sink(o, out);
  sink.stream() << j.dump(o.format == "json" ? 2 : -1) << '\n';
  return m.formula_accuracy < min_formula ? kExitNegative : kExitOk;
}

int cmd_monitor(const Options& o, const std::string& formula_path, const std::string& trace_path,
                std::size_t at, std::ostream& out) {
  const StlNode f = parse_stl_json(read_file(formula_path));
  const Trace trace = load_trace(trace_path);
  const bool sat = satisfies(f, trace, at);
  Sink sink(o, out);
  sink.stream() << (sat ? "SAT" : "UNSAT") << '\n';
  return sat ? kExitOk : kExitNegative;
}

std::vector<TextSpan> spans_of(const json& j, const std::string& transcript) {
  if (!j.contains("token_spans") || j["token_spans"].is_null()) return whitespace_tokens(transcript);
  std::vector<TextSpan> out;
  for (const auto& s : j["token_spans"]) {
    if (!s.is_array() || s.size() != 2) throw SchemaError(SchemaErrc::MissingField, "token span must be [begin, end]");
    out.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>()});
  }
  return out;
}

int cmd_reward(const Options& o, const std::string& rollouts_path, const std::string& dataset_path,
               std::ostream& out, std::ostream& err) {
  const RewardConfig cfg = o.reward();
  const auto dataset = load_dataset(dataset_path);
  const auto lines = lines_of(read_file(rollouts_path));

  std::vector<RewardReport> reports;
  std::vector<std::vector<TextSpan>> spans;
  std::vector<std::size_t> lengths;
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> group_order;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const json j = parse_line(lines[i], i + 1, rollouts_path);
    const std::string where = rollouts_path + ":" + std::to_string(i + 1) + ": ";
    try {
      const std::string transcript = j.at("rollout_transcript").get<std::string>();
      json ref = j.contains("reference") ? j["reference"] : json(j.value("reference_id", ""));
      const StlNode reference = reference_of(ref, dataset);
      RewardReport r = score_rollout(transcript, reference, cfg, j.value("truncated", false));
      r.group_id = j.contains("group_id") ? (j["group_id"].is_string() ? j["group_id"].get<std::string>()
                                                                       : j["group_id"].dump())
                                          : "";
      r.id = id_of(j);
      spans.push_back(spans_of(j, transcript));
      lengths.push_back(transcript.size());
      if (!groups.count(r.group_id)) group_order.push_back(r.group_id);
      groups[r.group_id].push_back(reports.size());
      reports.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw IoError(where + e.what());
    } catch (const SchemaError& e) {
      throw IoError(where + e.what());
    }
  }

  for (const std::string& g : group_order) {
    const auto& idx = groups[g];
    if (idx.size() != cfg.group_size) {
      err << "note: group '" << g << "' has " << idx.size() << " rollouts, expected "
          << cfg.group_size << '\n';
    }
    if (idx.size() < 2) continue;  // a lone rollout keeps zero advantages
    std::vector<RewardReport> members;
    for (std::size_t i : idx) members.push_back(std::move(reports[i]));
    group_advantages(members, cfg);
    for (std::size_t k = 0; k < idx.size(); ++k) reports[idx[k]] = std::move(members[k]);
  }

  Sink sink(o, out);
  auto all = ordered_json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    token_labels(reports[i], spans[i], lengths[i]);
    if (o.format == "json") {
      all.push_back(to_json(reports[i]));
    } else {
      sink.stream() << to_json(reports[i]).dump() << '\n';
    }
  }
  if (o.format == "json") sink.stream() << all.dump(2) << '\n';
  return kExitOk;
}

bool numeric(const std::string& s) {
  double v = 0.0;
  const char* first = s.data() + (!s.empty() && s[0] == '+');
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

int cmd_tool(const Options& o, const std::string& name, const std::vector<std::string>& args,
             std::ostream& out, std::ostream& err) {
  ToolCall call;
  if (args.size() == 1 && !args[0].empty() && args[0].front() == '{') {
    call = parse_tool_call(name + "(" + args[0] + ")");
  } else {
    std::string text = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) text += ", ";
      text += numeric(args[i]) ? args[i] : json(args[i]).dump();
    }
    call = parse_tool_call(text + ")");
  }
  const auto tool = tool_from_name(call.name);
  if (!tool) {
    err << "error: unknown tool '" << call.name << "'\n";
    return kExitNegative;
  }
  if (auto problem = check_arguments(call)) {
    err << "error: " << *problem << '\n';
    return kExitNegative;
  }
  const ToolResult r = execute(call);
  if (!r.ok) {
    err << "error: " << r.error_detail.value_or("tool failed") << '\n';
    return kExitNegative;
  }
  Sink sink(o, out);
  sink.stream() << format_tool_value(*tool, r.value) << '\n';
  return kExitOk;
}

int cmd_gen(const Options& o, const std::string& spec_path, std::size_t count, std::ostream& out) {
  json doc;
  try {
    doc = json::parse(read_file(spec_path));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("template is not JSON: ") + e.what());
  }
  const auto samples = generate_samples(template_from_json(doc), count, o.seed);
  Sink sink(o, out);
  sink.stream() << write_samples_jsonl(samples);
  return kExitOk;
}

int cmd_split(const Options& o, const std::string& path, const std::string& mode,
              const std::vector<std::string>& held_out, std::ostream& out) {
  auto samples = read_samples_jsonl(read_file(path));
  const SplitMode m = mode == "held-out" ? SplitMode::ScenarioHeldOut : SplitMode::Standard;
  const auto splits = make_splits(samples, m, o.seed, held_out);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i].split = splits[i];
  Sink sink(o, out);
  sink.stream() << write_samples_jsonl(samples);
  return kExitOk;
}

int cmd_dedup(const Options& o, const std::string& path, std::ostream& out, std::ostream& err) {
  const auto samples = read_samples_jsonl(read_file(path));
  const auto kept = symbolic_dedup(samples);
  err << "kept " << kept.size() << " of " << samples.size() << " samples\n";
  Sink sink(o, out);
  sink.stream() << write_samples_jsonl(kept);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Signal temporal logic toolkit: monitoring, matching, rewards and datasets"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tolerance", o.tolerance, "Numeric tolerance")
      ->envname("STLFORGE_TOLERANCE")->capture_default_str();
  app.add_option("--tau", o.tau, "Outcome bound on process rewards")
      ->envname("STLFORGE_TAU")->capture_default_str();
  app.add_option("--kappa", o.kappa, "Cap on partial tree-match credit")
      ->envname("STLFORGE_KAPPA")->capture_default_str();
  app.add_option("--group-size", o.group_size, "Expected rollouts per group")
      ->envname("STLFORGE_GROUP_SIZE")->capture_default_str();
  app.add_option("--max-tool-rounds", o.max_tool_rounds, "Tool calls allowed per rollout")
      ->envname("STLFORGE_MAX_TOOL_ROUNDS")->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->envname("STLFORGE_SEED")->capture_default_str();
  app.add_option("--format", o.format, "Output format")
      ->envname("STLFORGE_FORMAT")->check(CLI::IsMember({"json", "jsonl"}));
  app.add_option("--output", o.output, "Write data here instead of stdout")->envname("STLFORGE_OUTPUT");
  app.fallthrough();

  std::string path_a, path_b;
  auto* validate = app.add_subcommand("validate", "Check every sample of a dataset");
  validate->add_option("dataset", path_a)->required();

  double min_formula = 0.0;
  auto* metrics = app.add_subcommand("metrics", "Format and formula accuracy of predictions");
  metrics->add_option("predictions", path_a)->required();
  metrics->add_option("references", path_b);
  metrics->add_option("--min-formula-accuracy", min_formula, "Exit 1 below this value");

  std::size_t at = 0;
  auto* monitor = app.add_subcommand("monitor", "Evaluate a formula on a trace");
  monitor->add_option("formula", path_a)->required();
  monitor->add_option("trace", path_b)->required();
  monitor->add_option("--at", at, "Time index")->capture_default_str();

  auto* reward = app.add_subcommand("reward", "Score rollouts into reward reports");
  reward->add_option("rollouts", path_a)->required();
  reward->add_option("dataset", path_b);

  std::string tool_name_arg;
  std::vector<std::string> tool_args;
  auto* tool = app.add_subcommand("tool", "Run one tool");
  tool->add_option("name", tool_name_arg)->required();
  tool->add_option("args", tool_args);
  tool->allow_extras(false);

  std::size_t count = 100;
  auto* gen = app.add_subcommand("gen", "Generate samples from a template");
  gen->add_option("template", path_a)->required();
  gen->add_option("--count", count)->capture_default_str();

  std::string mode = "standard";
  std::vector<std::string> held_out;
  auto* split = app.add_subcommand("split", "Assign train/val/test splits");
  split->add_option("dataset", path_a)->required();
  split->add_option("--mode", mode)->check(CLI::IsMember({"standard", "held-out"}))->capture_default_str();
  split->add_option("--held-out", held_out, "Scenarios kept out of training")->delimiter(',');

  auto* dedup = app.add_subcommand("dedup", "Remove symbolic duplicates");
  dedup->add_option("dataset", path_a)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, path_a, out);
    if (metrics->parsed()) return cmd_metrics(o, path_a, path_b, min_formula, out);
    if (monitor->parsed()) return cmd_monitor(o, path_a, path_b, at, out);
    if (reward->parsed()) return cmd_reward(o, path_a, path_b, out, err);
    if (tool->parsed()) return cmd_tool(o, tool_name_arg, tool_args, out, err);
    if (gen->parsed()) return cmd_gen(o, path_a, count, out);
    if (split->parsed()) return cmd_split(o, path_a, mode, held_out, out);
    if (dedup->parsed()) return cmd_dedup(o, path_a, out, err);
  } catch (const ToolCallSyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNegative;
  } catch (const SchemaError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const EvalError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace stlforge::cli
