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

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace blockdsa {

namespace diag {
inline constexpr std::string_view kMalformedDocument = "MALFORMED_DOCUMENT";
inline constexpr std::string_view kUnknownOpcode = "UNKNOWN_OPCODE";
inline constexpr std::string_view kMissingSlot = "MISSING_SLOT";
inline constexpr std::string_view kExtraSlot = "EXTRA_SLOT";
inline constexpr std::string_view kUndeclaredVariable = "UNDECLARED_VARIABLE";
inline constexpr std::string_view kHatNotFirst = "HAT_NOT_FIRST";
inline constexpr std::string_view kSlotMismatch = "SLOT_MISMATCH";
inline constexpr std::string_view kUnknownSlot = "UNKNOWN_SLOT";
inline constexpr std::string_view kDsKindMismatch = "DS_KIND_MISMATCH";
}  // namespace diag

/// A static problem found in a project document.
///
/// `path` names the offending node, e.g. "scripts[0].blocks[2].inputs.OBJ_ID";
/// "$" is the document root.
struct Diagnostic {
  std::string code;
  std::string message;
  std::string path;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

/// One `path: CODE: message` line per diagnostic.
inline std::string render_report(const Diagnostics& ds) {
  std::string out;
  for (const auto& d : ds) {
    out += d.path;
    out += ": ";
    out += d.code;
    out += ": ";
    out += d.message;
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Diagnostics& ds) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& d : ds) {
    arr.push_back({{"code", d.code}, {"message", d.message}, {"path", d.path}});
  }
  return arr;
}

}  // namespace blockdsa
