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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "blockdsa/diagnostic.hpp"
#include "blockdsa/ds.hpp"
#include "json.hpp"

namespace blockdsa {

enum class BlockKind { Command, Reporter, Boolean, C, Hat };

/// What sits in an input position. Literals and variable references are
/// categories of their own; block inputs are categorised by their kind.
enum class InputCategory { Command, Reporter, Boolean, C, Hat, Literal, Variable };

/// VARIABLE_FIELD is the target of set/change: it names a variable rather
/// than reading one.
enum class SlotType { Any, BooleanInput, Substack, VariableField };

enum class Category { Arrays, Sets, Dictionaries, Algorithms, Control, Io, Operators, Variables };

enum class Provenance { Documented, Completion };

inline std::string_view to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Command: return "COMMAND";
    case BlockKind::Reporter: return "REPORTER";
    case BlockKind::Boolean: return "BOOLEAN";
    case BlockKind::C: return "C";
    case BlockKind::Hat: return "HAT";
  }
  return "COMMAND";
}

inline std::string_view to_string(SlotType t) {
  switch (t) {
    case SlotType::Any: return "ANY";
    case SlotType::BooleanInput: return "BOOLEAN_INPUT";
    case SlotType::Substack: return "SUBSTACK";
    case SlotType::VariableField: return "VARIABLE_FIELD";
  }
  return "ANY";
}

inline std::string_view to_string(Category c) {
  switch (c) {
    case Category::Arrays: return "arrays";
    case Category::Sets: return "sets";
    case Category::Dictionaries: return "dictionaries";
    case Category::Algorithms: return "algorithms";
    case Category::Control: return "control";
    case Category::Io: return "io";
    case Category::Operators: return "operators";
    case Category::Variables: return "variables";
  }
  return "control";
}

inline std::string_view to_string(InputCategory c) {
  switch (c) {
    case InputCategory::Command: return "COMMAND";
    case InputCategory::Reporter: return "REPORTER";
    case InputCategory::Boolean: return "BOOLEAN";
    case InputCategory::C: return "C";
    case InputCategory::Hat: return "HAT";
    case InputCategory::Literal: return "LITERAL";
    case InputCategory::Variable: return "VARIABLE";
  }
  return "LITERAL";
}

inline InputCategory input_category(BlockKind k) {
  switch (k) {
    case BlockKind::Command: return InputCategory::Command;
    case BlockKind::Reporter: return InputCategory::Reporter;
    case BlockKind::Boolean: return InputCategory::Boolean;
    case BlockKind::C: return InputCategory::C;
    case BlockKind::Hat: return InputCategory::Hat;
  }
  return InputCategory::Command;
}

struct SlotDef {
  std::string_view name;
  SlotType type = SlotType::Any;
  /// Family an id slot expects; drives the static DS_KIND_MISMATCH check.
  std::optional<DsKind> expects{};
};

struct BlockDef {
  std::string_view opcode;
  BlockKind kind;
  std::string_view text;
  std::vector<SlotDef> slots;
  Category category;
  /// Family the block operates on (its OBJ_ID slot).
  std::optional<DsKind> ds_kind{};
  /// Family of the object id this reporter hands back, if any.
  std::optional<DsKind> produces{};
  Provenance provenance = Provenance::Completion;
  std::string_view description{};

  const SlotDef* find_slot(std::string_view name) const {
    for (const auto& s : slots) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  bool produces_value() const { return kind == BlockKind::Reporter || kind == BlockKind::Boolean; }
};

/// The immutable built-in block set. Safe to share across threads.
class Catalog {
 public:
  const std::vector<BlockDef>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }

  const BlockDef* lookup(std::string_view opcode) const {
    auto it = index_.find(opcode);
    return it == index_.end() ? nullptr : &blocks_[it->second];
  }

  /// The single shared instance.
  static const Catalog& builtin();

 private:
  explicit Catalog(std::vector<BlockDef> blocks) : blocks_(std::move(blocks)) {
    for (std::size_t i = 0; i < blocks_.size(); ++i) index_.emplace(blocks_[i].opcode, i);
  }

  std::vector<BlockDef> blocks_;
  std::unordered_map<std::string_view, std::size_t> index_;
};

namespace detail {

inline std::vector<BlockDef> builtin_blocks() {
  using K = BlockKind;
  using S = SlotType;
  using C = Category;
  constexpr auto A = DsKind::Array;
  constexpr auto St = DsKind::Set;
  constexpr auto D = DsKind::Dict;
  constexpr auto P = Provenance::Documented;
  constexpr auto X = Provenance::Completion;
  const SlotDef array_id{"OBJ_ID", S::Any, A};
  const SlotDef set_id{"OBJ_ID", S::Any, St};
  const SlotDef other_set_id{"OTHER_ID", S::Any, St};
  const SlotDef dict_id{"OBJ_ID", S::Any, D};
  const SlotDef body{"SUBSTACK", S::Substack};
  const SlotDef cond{"CONDITION", S::BooleanInput};

  return {
      // arrays
      {"createNewArray", K::Reporter, "create new array", {}, C::Arrays, {}, A, P,
       "Makes an empty array and reports its id; store it with a set block."},
      {"addToArray", K::Command, "add [ITEM] to Array [OBJ_ID]", {array_id, {"ITEM"}}, C::Arrays, A, {}, X,
       "Appends an item to the end of the array. Duplicates are kept."},
      {"itemOfArray", K::Reporter, "item [INDEX] of Array [OBJ_ID]", {array_id, {"INDEX"}}, C::Arrays, A, {}, X,
       "Reports the item at a position; the first item is at 1."},
      {"lengthOfArray", K::Reporter, "length of Array [OBJ_ID]", {array_id}, C::Arrays, A, {}, X,
       "Reports how many items the array holds."},
      // algorithms
      {"sortArrayAscending", K::Command, "sort Array [OBJ_ID] in ascending order", {array_id}, C::Algorithms, A, {},
       P, "Sorts the array smallest first: numbers by value, then words alphabetically."},
      {"sortArrayDescending", K::Command, "sort Array [OBJ_ID] in descending order", {array_id}, C::Algorithms, A,
       {}, P, "Sorts the array largest first."},
      {"searchInArray", K::Reporter, "search for [ITEM] in Array [OBJ_ID]", {array_id, {"ITEM"}}, C::Algorithms, A,
       {}, P, "Reports the positions of every matching item, like \"2,4\", or \"not found\"."},
      // sets
      {"createNewSet", K::Reporter, "create new set", {}, C::Sets, {}, St, P,
       "Makes an empty set and reports its id."},
      {"addToSet", K::Command, "add [ELEMENT] to Set [OBJ_ID]", {set_id, {"ELEMENT"}}, C::Sets, St, {}, P,
       "Adds an element unless the set already has it."},
      {"isSetEmpty", K::Boolean, "is set [OBJ_ID] empty?", {set_id}, C::Sets, St, {}, P,
       "Answers yes or no."},
      {"checkContainInSet", K::Reporter, "Is [ELEMENT] present in Set [OBJ_ID]?", {set_id, {"ELEMENT"}}, C::Sets,
       St, {}, P, "Answers yes or no."},
      {"unionOfSets", K::Reporter, "Set [OBJ_ID] UNION Set [OTHER_ID]", {set_id, other_set_id}, C::Sets, St, St, P,
       "Reports a new set with the elements of both sets."},
      {"intersectionOfSets", K::Reporter, "Set [OBJ_ID] INTERSECTION Set [OTHER_ID]", {set_id, other_set_id},
       C::Sets, St, St, P, "Reports a new set with the elements found in both sets."},
      {"differenceOfSets", K::Reporter, "Set [OBJ_ID] DIFFERENCE Set [OTHER_ID]", {set_id, other_set_id}, C::Sets,
       St, St, P, "Reports a new set with the elements of the first set that are not in the second."},
      {"sizeOfSet", K::Reporter, "how many elements are in Set [OBJ_ID]?", {set_id}, C::Sets, St, {}, X,
       "Reports the number of elements."},
      // dictionaries
      {"createNewDictionary", K::Reporter, "create new dictionary", {}, C::Dictionaries, {}, D, P,
       "Makes an empty dictionary and reports its id."},
      {"addKeyValueToDictionary", K::Command, "add key [KEY] and value [VALUE] to Dictionary [OBJ_ID]",
       {dict_id, {"KEY"}, {"VALUE"}}, C::Dictionaries, D, {}, P,
       "Stores a key-value pair. If the key is already there its value is replaced."},
      {"getValueForKey", K::Reporter, "what is the value for key [KEY] in Dictionary [OBJ_ID]?", {dict_id, {"KEY"}},
       C::Dictionaries, D, {}, X, "Reports the value stored for a key."},
      {"containsKeyInDictionary", K::Boolean, "does Dictionary [OBJ_ID] have key [KEY]?", {dict_id, {"KEY"}},
       C::Dictionaries, D, {}, X, "Answers yes or no."},
      {"removeKeyFromDictionary", K::Command, "remove key [KEY] from Dictionary [OBJ_ID]", {dict_id, {"KEY"}},
       C::Dictionaries, D, {}, X, "Deletes a key and its value. Nothing happens if the key is missing."},
      {"sizeOfDictionary", K::Reporter, "how many keys are in Dictionary [OBJ_ID]?", {dict_id}, C::Dictionaries, D,
       {}, X, "Reports the number of keys."},
      // control
      {"forEachElementIn", K::C, "for each element in [OBJ_ID] [SUBSTACK]", {{"OBJ_ID"}, body}, C::Control, {}, {},
       P, "Runs the inner blocks once per array item, set element, or dictionary key."},
      {"currentElement", K::Reporter, "current element", {}, C::Control, {}, {}, X,
       "The element the innermost for each loop is visiting."},
      {"whenStarted", K::Hat, "when started", {}, C::Control, {}, {}, X, "Starts a script."},
      {"repeat", K::C, "repeat [TIMES] [SUBSTACK]", {{"TIMES"}, body}, C::Control, {}, {}, P,
       "Runs the inner blocks a number of times."},
      {"repeatUntil", K::C, "repeat until [CONDITION] [SUBSTACK]", {cond, body}, C::Control, {}, {}, X,
       "Runs the inner blocks until the condition is yes."},
      {"forever", K::C, "forever [SUBSTACK]", {body}, C::Control, {}, {}, P, "Runs the inner blocks forever."},
      {"ifThen", K::C, "if [CONDITION] then [SUBSTACK]", {cond, body}, C::Control, {}, {}, X,
       "Runs the inner blocks when the condition is yes."},
      {"ifElse", K::C, "if [CONDITION] then [SUBSTACK] else [SUBSTACK2]", {cond, body, {"SUBSTACK2", S::Substack}},
       C::Control, {}, {}, X, "Runs one of two stacks depending on the condition."},
      // io
      {"ask", K::Command, "ask [QUESTION] and wait", {{"QUESTION"}}, C::Io, {}, {}, X,
       "Asks a question and waits for the answer."},
      {"answer", K::Reporter, "answer", {}, C::Io, {}, {}, X, "The most recent answer."},
      {"say", K::Command, "say [MESSAGE]", {{"MESSAGE"}}, C::Io, {}, {}, X, "Shows a message."},
      {"sayForSecs", K::Command, "say [MESSAGE] for [SECS] seconds", {{"MESSAGE"}, {"SECS"}}, C::Io, {}, {}, X,
       "Shows a message for a number of seconds."},
      // variables
      {"setVariable", K::Command, "set [VARIABLE] to [VALUE]", {{"VARIABLE", S::VariableField}, {"VALUE"}},
       C::Variables, {}, {}, X, "Stores a value in a variable."},
      {"changeVariable", K::Command, "change [VARIABLE] by [VALUE]", {{"VARIABLE", S::VariableField}, {"VALUE"}},
       C::Variables, {}, {}, X, "Adds a number to a variable."},
      // operators
      {"equals", K::Boolean, "[OPERAND1] = [OPERAND2]", {{"OPERAND1"}, {"OPERAND2"}}, C::Operators, {}, {}, X,
       "Numbers compare by value, words ignore upper/lower case."},
      {"lessThan", K::Boolean, "[OPERAND1] < [OPERAND2]", {{"OPERAND1"}, {"OPERAND2"}}, C::Operators, {}, {}, X, {}},
      {"greaterThan", K::Boolean, "[OPERAND1] > [OPERAND2]", {{"OPERAND1"}, {"OPERAND2"}}, C::Operators, {}, {}, X,
       {}},
      {"andOp", K::Boolean, "[OPERAND1] and [OPERAND2]",
       {{"OPERAND1", S::BooleanInput}, {"OPERAND2", S::BooleanInput}}, C::Operators, {}, {}, X, {}},
      {"orOp", K::Boolean, "[OPERAND1] or [OPERAND2]", {{"OPERAND1", S::BooleanInput}, {"OPERAND2", S::BooleanInput}},
       C::Operators, {}, {}, X, {}},
      {"notOp", K::Boolean, "not [OPERAND]", {{"OPERAND", S::BooleanInput}}, C::Operators, {}, {}, X, {}},
      {"joinText", K::Reporter, "join [STRING1] [STRING2]", {{"STRING1"}, {"STRING2"}}, C::Operators, {}, {}, X,
       "Glues two texts together."},
      {"stringContains", K::Boolean, "[STRING1] contains [STRING2]?", {{"STRING1"}, {"STRING2"}}, C::Operators, {},
       {}, P, "Text matching only: looks for letters inside a text, not inside a data structure."},
      {"add", K::Reporter, "[NUM1] + [NUM2]", {{"NUM1"}, {"NUM2"}}, C::Operators, {}, {}, X, {}},
      {"subtract", K::Reporter, "[NUM1] - [NUM2]", {{"NUM1"}, {"NUM2"}}, C::Operators, {}, {}, X, {}},
      {"multiply", K::Reporter, "[NUM1] * [NUM2]", {{"NUM1"}, {"NUM2"}}, C::Operators, {}, {}, X, {}},
      {"divide", K::Reporter, "[NUM1] / [NUM2]", {{"NUM1"}, {"NUM2"}}, C::Operators, {}, {}, X, {}},
  };
}

}  // namespace detail

inline const Catalog& Catalog::builtin() {
  static const Catalog instance(detail::builtin_blocks());
  return instance;
}

inline const Catalog& catalog_load() { return Catalog::builtin(); }

inline const BlockDef* catalog_lookup(std::string_view opcode) { return Catalog::builtin().lookup(opcode); }

/// Whether an input of category `provided` may fill `slot` of `def`.
/// Returns nullopt when admissible, else a SLOT_MISMATCH (or UNKNOWN_SLOT)
/// diagnostic with an empty path for the caller to fill in.
inline std::optional<Diagnostic> slot_typecheck(const BlockDef& def, std::string_view slot, InputCategory provided) {
  const SlotDef* s = def.find_slot(slot);
  if (s == nullptr) {
    return Diagnostic{std::string(diag::kUnknownSlot),
                      std::string(def.opcode) + " has no input named " + std::string(slot), {}};
  }
  bool ok = false;
  switch (s->type) {
    case SlotType::Any:
      ok = provided == InputCategory::Literal || provided == InputCategory::Variable ||
           provided == InputCategory::Reporter || provided == InputCategory::Boolean;
      break;
    case SlotType::BooleanInput: ok = provided == InputCategory::Boolean; break;
    case SlotType::Substack: ok = provided == InputCategory::Command || provided == InputCategory::C; break;
    case SlotType::VariableField: ok = provided == InputCategory::Variable; break;
  }
  if (ok) return std::nullopt;

  std::string why;
  switch (s->type) {
    case SlotType::Any: why = "needs a value (text, variable, or reporter block)"; break;
    case SlotType::BooleanInput: why = "needs a yes/no block"; break;
    case SlotType::Substack: why = "needs a stack of command blocks"; break;
    case SlotType::VariableField: why = "needs a variable name"; break;
  }
  return Diagnostic{std::string(diag::kSlotMismatch),
                    "input " + std::string(slot) + " of " + std::string(def.opcode) + " " + why + ", got " +
                        std::string(to_string(provided)),
                    {}};
}

/// Bracketed names in a text template, in order of appearance.
inline std::vector<std::string> template_slots(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = text.find('[', pos)) != std::string_view::npos) {
    const auto close = text.find(']', pos);
    if (close == std::string_view::npos) break;
    out.emplace_back(text.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return out;
}

inline nlohmann::ordered_json catalog_to_json(const Catalog& cat = Catalog::builtin()) {
  using json = nlohmann::ordered_json;
  json blocks = json::array();
  for (const auto& b : cat.blocks()) {
    json slots = json::array();
    for (const auto& s : b.slots) {
      json js{{"name", s.name}, {"type", to_string(s.type)}};
      if (s.expects) js["expects"] = catalog_name(*s.expects);
      slots.push_back(std::move(js));
    }
    json jb;
    jb["opcode"] = b.opcode;
    jb["kind"] = to_string(b.kind);
    jb["text"] = b.text;
    jb["slots"] = std::move(slots);
    jb["category"] = to_string(b.category);
    jb["ds_kind"] = b.ds_kind ? json(catalog_name(*b.ds_kind)) : json(nullptr);
    if (b.produces) jb["produces"] = catalog_name(*b.produces);
    jb["provenance"] = b.provenance == Provenance::Documented ? "documented" : "completion";
    blocks.push_back(std::move(jb));
  }
  return json{{"version", 1}, {"blocks", std::move(blocks)}};
}

inline std::string catalog_document(const Catalog& cat = Catalog::builtin()) {
  return catalog_to_json(cat).dump(2) + "\n";
}

/// Human-readable block reference, grouped by category.
inline std::string catalog_markdown(const Catalog& cat = Catalog::builtin()) {
  std::string out = "# Block reference\n\n";
  out += "Inputs are written in square brackets. Blocks report values as text; yes/no blocks answer \"yes\" or "
         "\"no\".\n";
  for (auto category : {Category::Arrays, Category::Sets, Category::Dictionaries, Category::Algorithms,
                        Category::Control, Category::Io, Category::Variables, Category::Operators}) {
    out += "\n## ";
    out += to_string(category);
    out += "\n\n| Block | Kind | Opcode | What it does |\n|---|---|---|---|\n";
    for (const auto& b : cat.blocks()) {
      if (b.category != category) continue;
      out += "| `";
      out += b.text;
      out += "` | ";
      out += to_string(b.kind);
      out += " | ";
      out += b.opcode;
      out += " | ";
      out += b.description;
      out += " |\n";
    }
  }
  return out;
}

}  // namespace blockdsa
