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
#include <string>
#include <string_view>

namespace stlforge {

/// The 41 canonical CPS signal names shared by every benchmark sample, plus
/// a small alias table for common alternate spellings.
class SignalVocabulary {
 public:
  static const SignalVocabulary& standard();

  std::span<const std::string_view> names() const noexcept;
  bool is_canonical(std::string_view name) const noexcept;

  /// Canonical name for `name` (lower-cased, alias-resolved), or nullopt
  /// when it is neither canonical nor a known alias.
  std::optional<std::string> resolve(std::string_view name) const;

  /// Lower-cased, alias-resolved name; unknown names pass through lower-cased
  /// so they can be flagged later instead of rejected during parsing.
  std::string normalize(std::string_view name) const;
};

}  // namespace stlforge
