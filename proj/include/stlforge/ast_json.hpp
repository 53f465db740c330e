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

#include <json.hpp>

#include "stlforge/ast.hpp"

namespace stlforge {

/// Decodes a JSON document holding the "STL" root key.
StlNode stl_from_json(const nlohmann::json& document);

/// Decodes a single node (object form or bare predicate string).
StlNode node_from_json(const nlohmann::json& node);

/// The `{"STL": ...}` document for `node`, keys in wire order.
nlohmann::ordered_json stl_to_json(const StlNode& node);

}  // namespace stlforge
