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

#include "stlforge/vocabulary.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace stlforge {
namespace {

// Sorted, so membership is a binary search.
constexpr std::array<std::string_view, 41> kCanonical = {
    "accel",       "acceleration", "altitude",  "amplitude", "brake",
    "brightness",  "co2_level",    "concentration", "current", "density",
    "dist",        "distance",     "flow_rate", "frequency", "fuel_level",
    "heading",     "humidity",     "load",      "noise_level", "oxygen",
    "ph_level",    "phase",        "pitch",     "power",     "pressure",
    "roll",        "rpm",          "speed",     "steering",  "strain",
    "stress",      "temp",         "temperature", "throttle", "torque",
    "velocity",    "voltage",      "x_pos",     "y_pos",     "yaw",
    "z_pos"};
static_assert(std::is_sorted(kCanonical.begin(), kCanonical.end()));

constexpr std::array<std::pair<std::string_view, std::string_view>, 14>
    kAliases = {{
        {"airspeed", "speed"},
        {"co2", "co2_level"},
        {"engine_speed", "rpm"},
        {"flow", "flow_rate"},
        {"fuel", "fuel_level"},
        {"noise", "noise_level"},
        {"obstacle_distance", "distance"},
        {"ph", "ph_level"},
        {"pollutant_concentration", "concentration"},
        {"pos_x", "x_pos"},
        {"pos_y", "y_pos"},
        {"pos_z", "z_pos"},
        {"steering_angle", "steering"},
        {"throttle_position", "throttle"},
    }};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

const SignalVocabulary& SignalVocabulary::standard() {
  static const SignalVocabulary vocab;
  return vocab;
}

std::span<const std::string_view> SignalVocabulary::names() const noexcept {
  return kCanonical;
}

bool SignalVocabulary::is_canonical(std::string_view name) const noexcept {
  return std::binary_search(kCanonical.begin(), kCanonical.end(), name);
}

std::optional<std::string> SignalVocabulary::resolve(
    std::string_view name) const {
  std::string key = lower(name);
  if (is_canonical(key)) return key;
  for (const auto& [alias, canonical] : kAliases) {
    if (alias == key) return std::string(canonical);
  }
  return std::nullopt;
}

std::string SignalVocabulary::normalize(std::string_view name) const {
  if (auto resolved = resolve(name)) return *resolved;
  return lower(name);
}

}  // namespace stlforge
