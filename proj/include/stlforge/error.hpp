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

#include <stdexcept>
#include <string>
#include <string_view>

namespace stlforge {

/// Base for every exception thrown by the library. Each subclass carries a
/// kind enum so callers can branch without parsing messages.
template <typename Kind>
class KindedError : public std::runtime_error {
 public:
  KindedError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class SchemaErrc { Json, MissingField, BadArity, BadInterval, BadPredicate };

std::string_view to_string(SchemaErrc kind) noexcept;

/// Raised when STL JSON text or a predicate string violates the wire schema.
class SchemaError : public KindedError<SchemaErrc> {
 public:
  using KindedError::KindedError;
};

enum class EvalErrc { UnknownSignal, IndexOutOfRange, BadTrace };

std::string_view to_string(EvalErrc kind) noexcept;

class EvalError : public KindedError<EvalErrc> {
 public:
  using KindedError::KindedError;
};

/// Configuration that cannot be honoured (bad template, impossible split).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stlforge
