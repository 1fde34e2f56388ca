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
#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "blockdsa/catalog.hpp"
#include "json.hpp"

using namespace blockdsa;

namespace {

const std::vector<std::string> kOpcodes = {
    "createNewArray", "addToArray", "itemOfArray", "lengthOfArray", "sortArrayAscending", "sortArrayDescending",
    "searchInArray", "createNewSet", "addToSet", "isSetEmpty", "checkContainInSet", "unionOfSets",
    "intersectionOfSets", "differenceOfSets", "sizeOfSet", "createNewDictionary", "addKeyValueToDictionary",
    "getValueForKey", "containsKeyInDictionary", "removeKeyFromDictionary", "sizeOfDictionary", "forEachElementIn",
    "currentElement", "whenStarted", "ask", "answer", "say", "sayForSecs", "setVariable", "changeVariable", "repeat",
    "repeatUntil", "forever", "ifThen", "ifElse", "equals", "lessThan", "greaterThan", "andOp", "orOp", "notOp",
    "joinText", "stringContains", "add", "subtract", "multiply", "divide"};

constexpr InputCategory kAllCategories[] = {InputCategory::Command, InputCategory::Reporter, InputCategory::Boolean,
                                            InputCategory::C,       InputCategory::Hat,      InputCategory::Literal,
                                            InputCategory::Variable};

}  // namespace

TEST(Catalog, HoldsExactlyTheDocumentedOpcodes) {
  const auto& cat = catalog_load();
  std::vector<std::string> got;
  for (const auto& b : cat.blocks()) got.emplace_back(b.opcode);
  EXPECT_EQ(got.size(), 47u);
  EXPECT_EQ(std::set<std::string>(got.begin(), got.end()).size(), got.size()) << "duplicate opcode";
  EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), std::set<std::string>(kOpcodes.begin(), kOpcodes.end()));
  EXPECT_EQ(&catalog_load(), &catalog_load());
}

TEST(Catalog, LookupExamples) {
  const auto* contains = catalog_lookup("checkContainInSet");
  ASSERT_NE(contains, nullptr);
  EXPECT_EQ(contains->kind, BlockKind::Reporter);
  EXPECT_EQ(contains->text, "Is [ELEMENT] present in Set [OBJ_ID]?");
  EXPECT_EQ(contains->ds_kind, DsKind::Set);

  const auto* each = catalog_lookup("forEachElementIn");
  ASSERT_NE(each, nullptr);
  EXPECT_EQ(each->kind, BlockKind::C);

  const auto* sort = catalog_lookup("sortArrayAscending");
  ASSERT_NE(sort, nullptr);
  EXPECT_EQ(sort->kind, BlockKind::Command);
  EXPECT_EQ(sort->ds_kind, DsKind::Array);
  EXPECT_EQ(sort->category, Category::Algorithms);

  const auto* u = catalog_lookup("unionOfSets");
  ASSERT_NE(u, nullptr);
  EXPECT_EQ(u->kind, BlockKind::Reporter);
  EXPECT_EQ(u->ds_kind, DsKind::Set);
  EXPECT_EQ(u->produces, DsKind::Set);

  EXPECT_EQ(catalog_lookup("isSetEmpty")->kind, BlockKind::Boolean);
  EXPECT_EQ(catalog_lookup("whenStarted")->kind, BlockKind::Hat);
  EXPECT_EQ(catalog_lookup("frobnicate"), nullptr);
  EXPECT_EQ(catalog_lookup(""), nullptr);
}

TEST(Catalog, TemplateNamesMatchSlotsOneToOne) {
  for (const auto& b : catalog_load().blocks()) {
    auto from_text = template_slots(b.text);
    std::vector<std::string> from_slots;
    for (const auto& s : b.slots) from_slots.emplace_back(s.name);
    std::sort(from_text.begin(), from_text.end());
    std::sort(from_slots.begin(), from_slots.end());
    EXPECT_EQ(from_text, from_slots) << b.opcode;
    EXPECT_EQ(std::adjacent_find(from_text.begin(), from_text.end()), from_text.end()) << b.opcode;
  }
}

TEST(Catalog, DataStructureBlocksTakeObjectIdFirst) {
  int ds_blocks = 0;
  for (const auto& b : catalog_load().blocks()) {
    if (!b.ds_kind) continue;
    if (b.slots.empty()) {
      // create new X has nothing to operate on yet.
      EXPECT_TRUE(b.produces.has_value()) << b.opcode;
      continue;
    }
    ++ds_blocks;
    EXPECT_EQ(b.slots.front().name, "OBJ_ID") << b.opcode;
    EXPECT_EQ(b.slots.front().type, SlotType::Any) << b.opcode;
    EXPECT_EQ(b.slots.front().expects, b.ds_kind) << b.opcode;
  }
  EXPECT_GE(ds_blocks, 18);
}

TEST(Catalog, CSlotsAndSubstacks) {
  for (const auto& b : catalog_load().blocks()) {
    const bool has_substack = b.find_slot("SUBSTACK") != nullptr;
    EXPECT_EQ(has_substack, b.kind == BlockKind::C) << b.opcode;
  }
  EXPECT_NE(catalog_lookup("ifElse")->find_slot("SUBSTACK2"), nullptr);
  EXPECT_EQ(catalog_lookup("setVariable")->find_slot("VARIABLE")->type, SlotType::VariableField);
}

TEST(SlotTypecheck, Examples) {
  const auto& if_then = *catalog_lookup("ifThen");
  EXPECT_FALSE(slot_typecheck(if_then, "CONDITION", InputCategory::Boolean));
  auto bad = slot_typecheck(if_then, "CONDITION", InputCategory::Command);
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->code, "SLOT_MISMATCH");
  EXPECT_FALSE(slot_typecheck(*catalog_lookup("checkContainInSet"), "ELEMENT", InputCategory::Literal));
  auto unknown = slot_typecheck(if_then, "NOPE", InputCategory::Literal);
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->code, "UNKNOWN_SLOT");
  EXPECT_FALSE(slot_typecheck(if_then, "SUBSTACK", InputCategory::C));
  EXPECT_TRUE(slot_typecheck(if_then, "SUBSTACK", InputCategory::Reporter));
  EXPECT_TRUE(slot_typecheck(*catalog_lookup("setVariable"), "VARIABLE", InputCategory::Literal));
}

TEST(SlotTypecheck, KindInvariantsOverEveryBlockAndSlot) {
  const auto& cat = catalog_load();
  for (const auto& host : cat.blocks()) {
    for (const auto& slot : host.slots) {
      for (const auto& provided_def : cat.blocks()) {
        const auto provided = input_category(provided_def.kind);
        const bool ok = !slot_typecheck(host, slot.name, provided).has_value();
        if (slot.type == SlotType::Any) {
          EXPECT_EQ(ok, provided_def.produces_value()) << host.opcode << "." << slot.name << " <- " << provided_def.opcode;
        }
        if (slot.type == SlotType::BooleanInput) {
          EXPECT_EQ(ok, provided_def.kind == BlockKind::Boolean) << host.opcode << "." << slot.name;
        }
        if (slot.type == SlotType::Substack) {
          EXPECT_EQ(ok, provided_def.kind == BlockKind::Command || provided_def.kind == BlockKind::C);
        }
      }
      for (auto c : kAllCategories) {
        const auto d = slot_typecheck(host, slot.name, c);
        if (d) EXPECT_EQ(d->code, "SLOT_MISMATCH");
      }
    }
  }
}

TEST(CatalogExport, JsonDocument) {
  const auto doc = nlohmann::json::parse(catalog_document());
  EXPECT_EQ(doc["version"], 1);
  ASSERT_EQ(doc["blocks"].size(), 47u);
  bool saw_contains = false, saw_each = false;
  for (const auto& b : doc["blocks"]) {
    for (const char* key : {"opcode", "kind", "text", "slots", "category", "ds_kind", "provenance"}) {
      EXPECT_TRUE(b.contains(key)) << b["opcode"] << " lacks " << key;
    }
    if (b["opcode"] == "checkContainInSet") {
      saw_contains = true;
      EXPECT_EQ(b["kind"], "REPORTER");
      EXPECT_EQ(b["ds_kind"], "SET");
      EXPECT_EQ(b["provenance"], "documented");
      EXPECT_EQ(b["slots"][0]["name"], "OBJ_ID");
    }
    if (b["opcode"] == "forEachElementIn") {
      saw_each = true;
      EXPECT_EQ(b["kind"], "C");
    }
    if (b["opcode"] == "lengthOfArray") EXPECT_EQ(b["provenance"], "completion");
    if (b["opcode"] == "say") EXPECT_TRUE(b["ds_kind"].is_null());
  }
  EXPECT_TRUE(saw_contains);
  EXPECT_TRUE(saw_each);
  EXPECT_EQ(catalog_document(), catalog_document());
}

TEST(CatalogExport, Markdown) {
  const auto md = catalog_markdown();
  EXPECT_NE(md.find("Is [ELEMENT] present in Set [OBJ_ID]?"), std::string::npos);
  for (const char* heading : {"## arrays", "## sets", "## dictionaries", "## algorithms", "## control", "## io",
                              "## operators", "## variables"}) {
    EXPECT_NE(md.find(heading), std::string::npos) << heading;
  }
  for (const auto& op : kOpcodes) EXPECT_NE(md.find("| " + op + " |"), std::string::npos) << op;
}
