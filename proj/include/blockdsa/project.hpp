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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "blockdsa/box.hpp"
#include "blockdsa/catalog.hpp"
#include "blockdsa/diagnostic.hpp"
#include "json.hpp"

namespace blockdsa {

struct BlockInstance;

struct Literal {
  std::string text;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct VariableRef {
  std::string name;
  friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

/// What fills an input slot: literal text, a variable, or a reporter block.
struct Input {
  std::variant<Literal, VariableRef, box<BlockInstance>> source;

  static Input literal(std::string text);
  static Input variable(std::string name);
  static Input block(BlockInstance b);

  const BlockInstance* as_block() const {
    auto* b = std::get_if<box<BlockInstance>>(&source);
    return b ? &**b : nullptr;
  }
  const VariableRef* as_variable() const { return std::get_if<VariableRef>(&source); }
  const Literal* as_literal() const { return std::get_if<Literal>(&source); }
};

struct Script {
  std::vector<BlockInstance> blocks;
};

struct BlockInstance {
  std::string opcode;
  /// Filled inputs in the definition's slot order.
  std::vector<std::pair<std::string, Input>> inputs;
  std::optional<Script> substack;
  std::optional<Script> substack2;
  /// Resolved catalog entry; set by the parser and by make_block().
  const BlockDef* def = nullptr;

  const Input* input(std::string_view slot) const {
    for (const auto& [name, in] : inputs) {
      if (name == slot) return &in;
    }
    return nullptr;
  }
};

inline Input Input::literal(std::string text) { return {Literal{std::move(text)}}; }
inline Input Input::variable(std::string name) { return {VariableRef{std::move(name)}}; }
inline Input Input::block(BlockInstance b) { return {box<BlockInstance>(std::move(b))}; }

bool operator==(const BlockInstance& a, const BlockInstance& b);

inline bool operator==(const Input& a, const Input& b) { return a.source == b.source; }
inline bool operator==(const Script& a, const Script& b) { return a.blocks == b.blocks; }

// def is a cache of opcode and takes no part in equality.
inline bool operator==(const BlockInstance& a, const BlockInstance& b) {
  return a.opcode == b.opcode && a.inputs == b.inputs && a.substack == b.substack && a.substack2 == b.substack2;
}

struct Project {
  int version = 1;
  std::vector<std::string> variables;
  std::vector<Script> scripts;

  friend bool operator==(const Project&, const Project&) = default;
};

/// Convenience builder for tests and tools; inputs are reordered to slot
/// order and C-block substacks default to empty.
inline BlockInstance make_block(std::string_view opcode, std::vector<std::pair<std::string, Input>> inputs = {},
                                std::optional<Script> substack = std::nullopt,
                                std::optional<Script> substack2 = std::nullopt) {
  BlockInstance b;
  b.opcode = std::string(opcode);
  b.def = catalog_lookup(opcode);
  if (b.def != nullptr) {
    for (const auto& slot : b.def->slots) {
      for (auto& [name, in] : inputs) {
        if (name == slot.name) b.inputs.emplace_back(name, std::move(in));
      }
    }
    if (b.def->find_slot("SUBSTACK")) b.substack = substack ? std::move(substack) : Script{};
    if (b.def->find_slot("SUBSTACK2")) b.substack2 = substack2 ? std::move(substack2) : Script{};
  } else {
    b.inputs = std::move(inputs);
    b.substack = std::move(substack);
    b.substack2 = std::move(substack2);
  }
  return b;
}

// --- parsing ----------------------------------------------------------------

inline constexpr std::size_t kMaxNestingDepth = 128;

namespace detail {

class ProjectParser {
 public:
  using json = nlohmann::json;

  std::optional<Project> parse(std::string_view bytes) {
    json doc;
    try {
      doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::exception& e) {
      error(diag::kMalformedDocument, std::string("not valid JSON: ") + strip_prefix(e.what()), "$");
      return std::nullopt;
    }
    if (!doc.is_object()) {
      error(diag::kMalformedDocument, "a project must be a JSON object", "$");
      return std::nullopt;
    }
    Project p;
    for (const auto& [key, val] : doc.items()) {
      if (key != "version" && key != "variables" && key != "scripts") {
        error(diag::kMalformedDocument, "unknown field \"" + key + "\"", key);
      }
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"].get<long long>() != 1) {
      error(diag::kMalformedDocument, "version must be the integer 1", doc.contains("version") ? "version" : "$");
    }
    parse_variables(doc, p);
    if (auto it = doc.find("scripts"); it == doc.end() || !it->is_array()) {
      error(diag::kMalformedDocument, "scripts must be an array", it == doc.end() ? "$" : "scripts");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const auto path = "scripts[" + std::to_string(i) + "]";
        const auto& js = (*it)[i];
        if (!js.is_object() || !js.contains("blocks") || !js["blocks"].is_array()) {
          error(diag::kMalformedDocument, "a script must be an object with a blocks array", path);
          continue;
        }
        for (const auto& [key, val] : js.items()) {
          if (key != "blocks") error(diag::kMalformedDocument, "unknown field \"" + key + "\"", path + "." + key);
        }
        p.scripts.push_back(parse_stack(js["blocks"], path + ".blocks", true, 0));
      }
    }
    if (!diagnostics_.empty()) return std::nullopt;
    return p;
  }

  Diagnostics take_diagnostics() { return std::move(diagnostics_); }

 private:
  static std::string strip_prefix(std::string_view what) {
    // "[json.exception.parse_error.101] parse error at ..." -> "parse error at ..."
    if (!what.empty() && what.front() == '[') {
      if (auto close = what.find("] "); close != std::string_view::npos) what.remove_prefix(close + 2);
    }
    return std::string(what);
  }

  void error(std::string_view code, std::string message, std::string path) {
    diagnostics_.push_back({std::string(code), std::move(message), std::move(path)});
  }

  void parse_variables(const json& doc, Project& p) {
    auto it = doc.find("variables");
    if (it == doc.end() || !it->is_array()) {
      error(diag::kMalformedDocument, "variables must be an array of names", it == doc.end() ? "$" : "variables");
      return;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& v = (*it)[i];
      const auto path = "variables[" + std::to_string(i) + "]";
      if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
        error(diag::kMalformedDocument, "a variable name must be non-empty text", path);
        continue;
      }
      const auto& name = v.get_ref<const std::string&>();
      if (!declared_.insert(name).second) {
        error(diag::kMalformedDocument, "variable \"" + name + "\" is declared twice", path);
        continue;
      }
      p.variables.push_back(name);
    }
  }

  Script parse_stack(const json& arr, const std::string& path, bool top_level, std::size_t depth) {
    Script s;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto bpath = path + "[" + std::to_string(i) + "]";
      auto b = parse_block(arr[i], bpath, depth + 1);
      if (!b) continue;
      if (b->def != nullptr && b->def->kind == BlockKind::Hat && !(top_level && i == 0)) {
        error(diag::kHatNotFirst, std::string(b->opcode) + " can only start a script", bpath);
      }
      s.blocks.push_back(std::move(*b));
    }
    return s;
  }

  std::optional<BlockInstance> parse_block(const json& jb, const std::string& path, std::size_t depth) {
    if (depth > kMaxNestingDepth) {
      error(diag::kMalformedDocument, "blocks are nested too deeply", path);
      return std::nullopt;
    }
    if (!jb.is_object()) {
      error(diag::kMalformedDocument, "a block must be an object", path);
      return std::nullopt;
    }
    auto op = jb.find("opcode");
    if (op == jb.end() || !op->is_string()) {
      error(diag::kMalformedDocument, "a block needs an opcode", path);
      return std::nullopt;
    }
    for (const auto& [key, val] : jb.items()) {
      if (key != "opcode" && key != "inputs" && key != "substack" && key != "substack2") {
        error(diag::kMalformedDocument, "unknown field \"" + key + "\"", path + "." + key);
      }
    }
    BlockInstance b;
    b.opcode = op->get<std::string>();
    b.def = catalog_lookup(b.opcode);
    if (b.def == nullptr) {
      error(diag::kUnknownOpcode, "there is no block called \"" + b.opcode + "\"", path);
      return std::nullopt;
    }
    const BlockDef& def = *b.def;

    const json* inputs = nullptr;
    if (auto it = jb.find("inputs"); it != jb.end()) {
      if (!it->is_object()) {
        error(diag::kMalformedDocument, "inputs must be an object", path + ".inputs");
      } else {
        inputs = &*it;
      }
    }
    if (inputs != nullptr) {
      for (const auto& [key, val] : inputs->items()) {
        const SlotDef* slot = def.find_slot(key);
        if (slot == nullptr || slot->type == SlotType::Substack) {
          error(diag::kExtraSlot, b.opcode + " has no input named " + key, path + ".inputs." + key);
        }
      }
    }
    for (const auto& slot : def.slots) {
      if (slot.type == SlotType::Substack) continue;
      const std::string name(slot.name);
      if (inputs == nullptr || !inputs->contains(name)) {
        error(diag::kMissingSlot, b.opcode + " is missing input " + name, path);
        continue;
      }
      if (auto in = parse_input((*inputs)[name], path + ".inputs." + name, depth)) {
        b.inputs.emplace_back(name, std::move(*in));
      }
    }

    for (const char* field : {"substack", "substack2"}) {
      const bool allowed = def.find_slot(std::string_view(field) == "substack" ? "SUBSTACK" : "SUBSTACK2") != nullptr;
      auto& target = std::string_view(field) == "substack" ? b.substack : b.substack2;
      auto it = jb.find(field);
      if (it == jb.end()) {
        if (allowed) target = Script{};
        continue;
      }
      const std::string spath = path + "." + field;
      if (!allowed) {
        error(diag::kExtraSlot, b.opcode + " has no " + field, spath);
        continue;
      }
      if (!it->is_array()) {
        error(diag::kMalformedDocument, std::string(field) + " must be an array of blocks", spath);
        continue;
      }
      target = parse_stack(*it, spath, false, depth);
    }
    return b;
  }

  std::optional<Input> parse_input(const json& ji, const std::string& path, std::size_t depth) {
    if (!ji.is_object() || ji.size() != 1) {
      error(diag::kMalformedDocument, "an input must have exactly one of literal, variable, block", path);
      return std::nullopt;
    }
    const auto& [key, val] = *ji.items().begin();
    if (key == "literal") {
      if (!val.is_string()) {
        error(diag::kMalformedDocument, "a literal must be text", path + ".literal");
        return std::nullopt;
      }
      return Input::literal(val.get<std::string>());
    }
    if (key == "variable") {
      if (!val.is_string()) {
        error(diag::kMalformedDocument, "a variable reference must be a name", path + ".variable");
        return std::nullopt;
      }
      auto name = val.get<std::string>();
      if (!declared_.contains(name)) {
        error(diag::kUndeclaredVariable, "variable \"" + name + "\" is not declared", path + ".variable");
        return std::nullopt;
      }
      return Input::variable(std::move(name));
    }
    if (key == "block") {
      auto b = parse_block(val, path + ".block", depth + 1);
      if (!b) return std::nullopt;
      return Input::block(std::move(*b));
    }
    error(diag::kMalformedDocument, "an input must have exactly one of literal, variable, block", path);
    return std::nullopt;
  }

  Diagnostics diagnostics_;
  std::unordered_set<std::string> declared_;
};

}  // namespace detail

/// Parses a project document. Total: any byte sequence yields either a
/// Project or at least one diagnostic, never an exception.
inline std::variant<Project, Diagnostics> parse_project(std::string_view bytes) {
  try {
    detail::ProjectParser parser;
    if (auto p = parser.parse(bytes)) return std::move(*p);
    return parser.take_diagnostics();
  } catch (const std::exception& e) {
    return Diagnostics{{std::string(diag::kMalformedDocument), e.what(), "$"}};
  }
}

// --- serialization ----------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json block_to_json(const BlockInstance& b);

inline nlohmann::ordered_json stack_to_json(const Script& s) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& b : s.blocks) arr.push_back(block_to_json(b));
  return arr;
}

inline nlohmann::ordered_json input_to_json(const Input& in) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (const auto* l = in.as_literal()) j["literal"] = l->text;
  else if (const auto* v = in.as_variable()) j["variable"] = v->name;
  else j["block"] = block_to_json(*in.as_block());
  return j;
}

inline nlohmann::ordered_json block_to_json(const BlockInstance& b) {
  nlohmann::ordered_json j;
  j["opcode"] = b.opcode;
  auto inputs = nlohmann::ordered_json::object();
  for (const auto& [name, in] : b.inputs) inputs[name] = input_to_json(in);
  j["inputs"] = std::move(inputs);
  if (b.substack) j["substack"] = stack_to_json(*b.substack);
  if (b.substack2) j["substack2"] = stack_to_json(*b.substack2);
  return j;
}

}  // namespace detail

inline nlohmann::ordered_json project_to_json(const Project& p) {
  nlohmann::ordered_json j;
  j["version"] = p.version;
  j["variables"] = p.variables;
  auto scripts = nlohmann::ordered_json::array();
  for (const auto& s : p.scripts) {
    nlohmann::ordered_json js;
    js["blocks"] = detail::stack_to_json(s);
    scripts.push_back(std::move(js));
  }
  j["scripts"] = std::move(scripts);
  return j;
}

/// Canonical form: fixed key order, inputs in slot order, two-space indent,
/// trailing newline.
inline std::string serialize_project(const Project& p) {
  return project_to_json(p).dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

// --- static validation ------------------------------------------------------

namespace detail {

class ProjectValidator {
 public:
  explicit ProjectValidator(const Project& p) : project_(p) {}

  Diagnostics run() {
    for (const auto& s : project_.scripts) collect_assignments(s);
    for (std::size_t i = 0; i < project_.scripts.size(); ++i) {
      check_stack(project_.scripts[i], "scripts[" + std::to_string(i) + "].blocks", true);
    }
    return std::move(out_);
  }

 private:
  // Sentinel for "assigned something that is not a fresh data structure".
  static constexpr int kUnknownKind = -1;

  void collect_assignments(const Script& s) {
    for (const auto& b : s.blocks) collect_assignments(b);
  }

  void collect_assignments(const BlockInstance& b) {
    if (b.opcode == "setVariable") {
      const Input* target = b.input("VARIABLE");
      const Input* value = b.input("VALUE");
      if (target && target->as_variable() && value) {
        const auto kind = infer_block_kind(value);
        assigned_[target->as_variable()->name].insert(kind ? static_cast<int>(*kind) : kUnknownKind);
      }
    }
    for (const auto& [name, in] : b.inputs) {
      if (const auto* child = in.as_block()) collect_assignments(*child);
    }
    if (b.substack) collect_assignments(*b.substack);
    if (b.substack2) collect_assignments(*b.substack2);
  }

  static std::optional<DsKind> infer_block_kind(const Input* in) {
    const BlockInstance* b = in ? in->as_block() : nullptr;
    if (b == nullptr || b->def == nullptr) return std::nullopt;
    return b->def->produces;
  }

  // Family an input statically denotes, when it can be traced.
  std::optional<DsKind> infer_kind(const Input& in) const {
    if (auto k = infer_block_kind(&in)) return k;
    if (const auto* v = in.as_variable()) {
      auto it = assigned_.find(v->name);
      if (it != assigned_.end() && it->second.size() == 1 && *it->second.begin() != kUnknownKind) {
        return static_cast<DsKind>(*it->second.begin());
      }
    }
    return std::nullopt;
  }

  void add(std::string_view code, std::string message, std::string path) {
    out_.push_back({std::string(code), std::move(message), std::move(path)});
  }

  void check_stack(const Script& s, const std::string& path, bool top_level) {
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
      const auto& b = s.blocks[i];
      const auto bpath = path + "[" + std::to_string(i) + "]";
      if (b.def == nullptr) {
        add(diag::kUnknownOpcode, "there is no block called \"" + b.opcode + "\"", bpath);
        continue;
      }
      const bool hat_ok = top_level && i == 0 && b.def->kind == BlockKind::Hat;
      if (b.def->produces_value()) {
        add(diag::kSlotMismatch,
            std::string(b.opcode) + " reports a value and cannot be stacked; put it inside another block", bpath);
      } else if (b.def->kind == BlockKind::Hat && !hat_ok) {
        add(diag::kHatNotFirst, std::string(b.opcode) + " can only start a script", bpath);
      }
      check_block(b, bpath);
    }
  }

  void check_block(const BlockInstance& b, const std::string& path) {
    const BlockDef& def = *b.def;
    for (const auto& [slot_name, in] : b.inputs) {
      const auto ipath = path + ".inputs." + slot_name;
      const BlockInstance* child = in.as_block();
      if (child != nullptr && child->def == nullptr) {
        add(diag::kUnknownOpcode, "there is no block called \"" + child->opcode + "\"", ipath + ".block");
        continue;
      }
      const InputCategory provided = child ? input_category(child->def->kind)
                                     : in.as_variable() ? InputCategory::Variable
                                                        : InputCategory::Literal;
      if (auto d = slot_typecheck(def, slot_name, provided)) {
        d->path = ipath;
        out_.push_back(std::move(*d));
      } else {
        check_ds_flow(def, slot_name, in, ipath);
      }
      if (child != nullptr) check_block(*child, ipath + ".block");
    }
    if (b.substack) check_stack(*b.substack, path + ".substack", false);
    if (b.substack2) check_stack(*b.substack2, path + ".substack2", false);
  }

  void check_ds_flow(const BlockDef& def, const std::string& slot_name, const Input& in, const std::string& path) {
    const SlotDef* slot = def.find_slot(slot_name);
    const auto inferred = infer_kind(in);
    if (slot->expects && inferred && *slot->expects != *inferred) {
      add(diag::kDsKindMismatch, kind_mismatch_message(*slot->expects), path);
      return;
    }
    // A freshly created structure is only useful when stored or operated on.
    const BlockInstance* child = in.as_block();
    const bool fresh = child != nullptr && child->def->produces && child->def->slots.empty();
    if (!fresh) return;
    const bool stored = def.opcode == "setVariable" && slot_name == "VALUE";
    const bool operated_on = slot->expects.has_value() || def.opcode == "forEachElementIn";
    if (!stored && !operated_on) {
      add(diag::kSlotMismatch,
          "the id reported by " + std::string(child->def->text) + " should be stored in a variable with a set block",
          path);
    }
  }

  const Project& project_;
  Diagnostics out_;
  std::unordered_map<std::string, std::set<int>> assigned_;
};

}  // namespace detail

/// Static checks beyond parsing: slot admissibility and, where ids can be
/// traced without running the program, data-structure family mismatches.
inline Diagnostics validate_project(const Project& p) { return detail::ProjectValidator(p).run(); }

}  // namespace blockdsa
