/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cassert>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace blockdsa {

enum class DsErrorCode {
  InvalidObject,
  KindMismatch,
  IndexOutOfRange,
  KeyNotFound,
};

inline std::string_view to_string(DsErrorCode c) {
  switch (c) {
    case DsErrorCode::InvalidObject: return "INVALID_OBJECT";
    case DsErrorCode::KindMismatch: return "KIND_MISMATCH";
    case DsErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case DsErrorCode::KeyNotFound: return "KEY_NOT_FOUND";
  }
  return "UNKNOWN";
}

/// A learner-facing data-structure error. The message text is shown verbatim.
struct DsError {
  DsErrorCode code;
  std::string message;

  friend bool operator==(const DsError&, const DsError&) = default;
};

/// Value-or-error. Errors here are ordinary outcomes surfaced to the program,
/// not exceptional conditions.
template <class T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(DsError error) : v_(std::move(error)) {}  // NOLINT(google-explicit-constructor)

  bool has_value() const { return v_.index() == 0; }
  explicit operator bool() const { return has_value(); }

  T& value() & { assert(has_value()); return std::get<0>(v_); }
  const T& value() const& { assert(has_value()); return std::get<0>(v_); }
  T&& value() && { assert(has_value()); return std::get<0>(std::move(v_)); }

  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

  const DsError& error() const { assert(!has_value()); return std::get<1>(v_); }

 private:
  std::variant<T, DsError> v_;
};

}  // namespace blockdsa
