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

#include <cctype>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "stlforge/semantics.hpp"

namespace stlforge {

Trace::Trace(std::map<std::string, std::vector<double>> signals) {
  if (signals.empty()) throw EvalError(EvalErrc::BadTrace, "trace has no signals");
  length_ = signals.begin()->second.size();
  for (auto& [name, samples] : signals) {
    if (samples.size() != length_) {
      throw EvalError(EvalErrc::BadTrace,
                      "signal '" + name + "' has " +
                          std::to_string(samples.size()) + " samples, expected " +
                          std::to_string(length_));
    }
    signals_.emplace(name, std::move(samples));
  }
  if (length_ == 0) throw EvalError(EvalErrc::BadTrace, "trace is empty");
}

bool Trace::has_signal(std::string_view name) const {
  return signals_.find(name) != signals_.end();
}

std::span<const double> Trace::signal(std::string_view name) const {
  auto it = signals_.find(name);
  if (it == signals_.end()) {
    throw EvalError(EvalErrc::UnknownSignal,
                    "trace has no signal '" + std::string(name) + "'");
  }
  return it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_sample(std::string_view cell, std::size_t row) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || end != cell.data() + cell.size()) {
    throw EvalError(EvalErrc::BadTrace, "row " + std::to_string(row) +
                                            ": '" + std::string(cell) +
                                            "' is not a number");
  }
  return v;
}

}  // namespace

Trace parse_trace_csv(std::string_view text) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty()) continue;
    auto cells = split_csv_row(line);
    if (names.empty()) {
      for (auto c : cells) names.emplace_back(c);
      columns.resize(names.size());
      continue;
    }
    ++row;
    if (cells.size() != names.size()) {
      throw EvalError(EvalErrc::BadTrace,
                      "row " + std::to_string(row) + " has " +
                          std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(names.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      columns[i].push_back(parse_sample(cells[i], row));
    }
  }
  std::map<std::string, std::vector<double>> signals;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!signals.emplace(names[i], std::move(columns[i])).second) {
      throw EvalError(EvalErrc::BadTrace, "duplicate column '" + names[i] + "'");
    }
  }
  return Trace(std::move(signals));
}

Trace parse_trace_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw EvalError(EvalErrc::BadTrace, e.what());
  }
  if (!doc.is_object()) {
    throw EvalError(EvalErrc::BadTrace, "trace JSON must be an object");
  }
  std::map<std::string, std::vector<double>> signals;
  for (const auto& [name, samples] : doc.items()) {
    if (!samples.is_array()) {
      throw EvalError(EvalErrc::BadTrace, "signal '" + name + "' is not a list");
    }
    std::vector<double> column;
    for (const auto& v : samples) {
      if (!v.is_number()) {
        throw EvalError(EvalErrc::BadTrace,
                        "signal '" + name + "' has a non-numeric sample");
      }
      column.push_back(v.get<double>());
    }
    signals.emplace(name, std::move(column));
  }
  return Trace(std::move(signals));
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EvalError(EvalErrc::BadTrace, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return csv ? parse_trace_csv(buf.str()) : parse_trace_json(buf.str());
}

}  // namespace stlforge
