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

// Generator templates shared by the unit and acceptance tests.

#pragma once

namespace fixtures {

inline constexpr const char* kAltitudeHold = R"({
  "domain": "aerospace_systems", "scenario": "altitude hold",
  "signals": [
    {"signal": "altitude", "range": [100, 5000], "unit": "m", "alt_units": ["ft"]},
    {"signal": "airspeed", "range": [20, 250], "unit": "m/s", "alt_units": ["kn", "km/h"]},
    {"signal": "pitch", "range": [-30, 30]}
  ],
  "operators": ["Globally", "Finally", "Until", "Since", "Historically", "Once",
                "imply", "and", "or", "Not", "Rise", "Fall"],
  "horizon": [0, 7200],
  "tools": ["parse_duration", "convert_unit", "eval_math_expr", "calc_time_diff"],
  "allow_edges": true
})";

inline constexpr const char* kEmergencyBraking = R"({
  "domain": "autonomous_driving", "scenario": "AEB",
  "signals": [
    {"signal": "speed", "range": [0, 40], "unit": "m/s", "alt_units": ["km/h", "mph"]},
    {"signal": "obstacle_distance", "range": [0, 200], "unit": "m", "alt_units": ["ft"]},
    {"signal": "brake", "range": [0, 1]}
  ],
  "operators": ["Globally", "Finally", "Until", "imply", "and", "or", "Not"],
  "horizon": [0, 600],
  "tools": ["parse_duration", "convert_unit", "eval_math_expr", "calc_time_diff"]
})";

inline constexpr const char* kAdaptiveCruise = R"({
  "domain": "autonomous_driving", "scenario": "ACC",
  "signals": [
    {"signal": "velocity", "range": [0, 45], "unit": "m/s", "alt_units": ["km/h"]},
    {"signal": "dist", "range": [5, 150], "unit": "m"}
  ],
  "operators": ["Globally", "Finally", "imply", "and", "or"],
  "horizon": [0, 300],
  "tools": ["parse_duration", "convert_unit"],
  "languages": ["en"]
})";

inline constexpr const char* kBoiler = R"({
  "domain": "industrial_control", "scenario": "boiler system",
  "signals": [
    {"signal": "pressure", "range": [100, 2000], "unit": "kPa", "alt_units": ["psi", "bar"]},
    {"signal": "temperature", "range": [20, 300], "unit": "C", "alt_units": ["F"]},
    {"signal": "flow_rate", "range": [0, 50]}
  ],
  "operators": ["Globally", "Finally", "Until", "Since", "Historically", "Once",
                "imply", "and", "or", "Not", "Rise", "Fall"],
  "horizon": [0, 3600],
  "tools": ["parse_duration", "convert_unit", "eval_math_expr", "calc_time_diff"],
  "allow_edges": true
})";

}  // namespace fixtures
