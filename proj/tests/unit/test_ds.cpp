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

#include <string>
#include <unordered_set>
#include <vector>

#include "blockdsa/ds.hpp"
#include "blockdsa/registry.hpp"
#include "support/oracles.hpp"

using namespace blockdsa;

namespace {

std::vector<std::string> texts(const std::vector<Value>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.text);
  return out;
}

ArrayDs array_of(const std::vector<std::string>& items) {
  ArrayDs a;
  for (const auto& s : items) array_add(a, Value(s));
  return a;
}

SetDs set_of(const std::vector<std::string>& items) {
  SetDs s;
  for (const auto& x : items) set_add(s, Value(x));
  return s;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST(ArrayDs, AddKeepsDuplicates) {
  ArrayDs a;
  array_add(a, Value("apple"));
  EXPECT_EQ(texts(a.items), Strings{"apple"});
  auto b = array_of({"x"});
  array_add(b, Value("x"));
  EXPECT_EQ(texts(b.items), (Strings{"x", "x"}));
  ArrayDs c;
  for (int i = 0; i < 1000; ++i) array_add(c, Value(std::to_string(i)));
  EXPECT_EQ(array_length(c).text, "1000");
}

TEST(ArrayDs, ItemAtIsOneBased) {
  auto a = array_of({"b", "a"});
  array_sort(a, SortDirection::Descending);
  EXPECT_EQ(array_item_at(a, Value("1"))->text, "b");
  auto x = array_of({"x"});
  auto r = array_item_at(x, Value("0"));
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().code, DsErrorCode::IndexOutOfRange);
  EXPECT_EQ(r.error().message, "Index out of range");
  EXPECT_EQ(array_item_at(array_of({"x", "y", "z"}), Value("2"))->text, "y");
  EXPECT_EQ(array_item_at(array_of({"x", "y", "z"}), Value("2.0"))->text, "y");
  for (const char* bad : {"1.5", "4", "-1", "two", ""}) EXPECT_FALSE(array_item_at(array_of({"x", "y", "z"}), Value(bad))) << bad;
}

TEST(ArrayDs, Length) {
  EXPECT_EQ(array_length(ArrayDs{}).text, "0");
  EXPECT_EQ(array_length(array_of({"a", "b"})).text, "2");
  ArrayDs a;
  for (int i = 0; i < 7; ++i) array_add(a, Value("q"));
  EXPECT_EQ(array_length(a).text, "7");
}

TEST(ArrayDs, SortExamples) {
  auto a = array_of({"banana", "apple", "cherry"});
  array_sort(a, SortDirection::Ascending);
  EXPECT_EQ(texts(a.items), (Strings{"apple", "banana", "cherry"}));
  auto b = array_of({"3", "10", "2"});
  array_sort(b, SortDirection::Descending);
  EXPECT_EQ(texts(b.items), (Strings{"10", "3", "2"}));
  auto c = array_of({"b", "2", "a", "10"});
  array_sort(c, SortDirection::Ascending);
  EXPECT_EQ(texts(c.items), (Strings{"2", "10", "a", "b"}));
}

TEST(ArrayDs, SortTiesKeepOriginalOrder) {
  auto a = array_of({"B", "1.0", "b", "1", "a"});
  array_sort(a, SortDirection::Ascending);
  EXPECT_EQ(texts(a.items), (Strings{"1.0", "1", "a", "B", "b"}));
  array_sort(a, SortDirection::Descending);
  EXPECT_EQ(texts(a.items), (Strings{"B", "b", "a", "1.0", "1"}));
}

TEST(ArrayDs, SortMatchesStableOracle) {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto items = gen.values(300);
    for (bool asc : {true, false}) {
      auto a = array_of(items);
      array_sort(a, asc ? SortDirection::Ascending : SortDirection::Descending);
      ASSERT_EQ(texts(a.items), oracle::sorted(items, asc)) << "trial " << trial;
    }
  }
}

TEST(ArrayDs, SearchExamples) {
  EXPECT_EQ(array_search(array_of({"5", "2", "8", "2"}), Value("2")).text, "2,4");
  EXPECT_EQ(array_search(array_of({"apple"}), Value("Apple")).text, "1");
  EXPECT_EQ(array_search(array_of({"a", "b"}), Value("z")).text, "not found");
  EXPECT_EQ(array_search(ArrayDs{}, Value("z")).text, "not found");
  EXPECT_EQ(array_search(array_of({"1", "x", "1.00", "01"}), Value("1.0")).text, "1,3,4");
}

TEST(ArrayDs, SearchLeavesArrayUntouched) {
  auto a = array_of({"c", "a", "b"});
  array_search(a, Value("a"));
  EXPECT_EQ(texts(a.items), (Strings{"c", "a", "b"}));
}

TEST(ArrayDs, SearchMatchesLinearScan) {
  oracle::Gen gen(22);
  for (int trial = 0; trial < 500; ++trial) {
    const auto items = gen.values(200);
    const std::string target = !items.empty() && gen.uniform(0, 1) ? items[static_cast<std::size_t>(gen.uniform(0, static_cast<int>(items.size()) - 1))] : gen.value();
    ASSERT_EQ(array_search(array_of(items), Value(target)).text, oracle::search(items, target)) << target;
  }
}

TEST(SetDs, AddDeduplicatesUnderCanon) {
  SetDs s;
  set_add(s, Value("a"));
  EXPECT_EQ(texts(s.items()), Strings{"a"});
  set_add(s, Value("A"));
  EXPECT_EQ(texts(s.items()), Strings{"a"});
  set_add(s, Value("b"));
  EXPECT_EQ(texts(s.items()), (Strings{"a", "b"}));
}

TEST(SetDs, EmptyAndContains) {
  SetDs s;
  EXPECT_EQ(set_is_empty(s).text, "yes");
  set_add(s, Value("a"));
  EXPECT_EQ(set_is_empty(s).text, "no");
  SetDs d;
  set_add(d, Value("x"));
  set_add(d, Value("X"));
  EXPECT_EQ(set_is_empty(d).text, "no");
  EXPECT_EQ(set_size(d).text, "1");
  EXPECT_EQ(set_contains(set_of({"a", "b"}), Value("a")).text, "yes");
  EXPECT_EQ(set_contains(set_of({"a"}), Value("c")).text, "no");
  EXPECT_EQ(set_contains(set_of({"1"}), Value("1.0")).text, "yes");
}

TEST(SetDs, AlgebraExamples) {
  const auto a = set_of({"1", "2", "3"});
  const auto b = set_of({"2", "3", "4"});
  EXPECT_EQ(texts(set_combine(a, b, SetOp::Union).items()), (Strings{"1", "2", "3", "4"}));
  EXPECT_EQ(texts(set_combine(a, b, SetOp::Intersection).items()), (Strings{"2", "3"}));
  EXPECT_EQ(texts(set_combine(a, b, SetOp::Difference).items()), Strings{"1"});
  EXPECT_EQ(texts(set_combine(set_of({"Apple"}), set_of({"apple", "pear"}), SetOp::Union).items()),
            (Strings{"Apple", "pear"}));
  EXPECT_EQ(texts(a.items()), (Strings{"1", "2", "3"}));
  EXPECT_EQ(texts(b.items()), (Strings{"2", "3", "4"}));
}

TEST(SetDs, DedupInvariantUnderManyAdds) {
  oracle::Gen gen(23);
  SetDs s;
  std::vector<std::string> model;
  for (int i = 0; i < 10000; ++i) {
    const auto v = gen.value();
    set_add(s, Value(v));
    if (!oracle::member(model, v)) model.push_back(v);
  }
  EXPECT_EQ(texts(s.items()), model);
  const auto items = s.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) ASSERT_FALSE(equivalent(items[i], items[j]));
  }
}

TEST(DictDs, PutReplacesInPlace) {
  DictDs d;
  dict_put(d, Value("1"), Value("Potato"));
  dict_put(d, Value("2"), Value("Milk"));
  dict_put(d, Value("3"), Value("Honey"));
  dict_put(d, Value("2"), Value("Yogurt"));
  std::vector<std::pair<std::string, std::string>> got;
  for (const auto& [k, kv] : d.pairs) got.emplace_back(kv.first.text, kv.second.text);
  EXPECT_EQ(got, (std::vector<std::pair<std::string, std::string>>{{"1", "Potato"}, {"2", "Yogurt"}, {"3", "Honey"}}));
}

TEST(DictDs, GetHasRemoveSize) {
  DictDs d;
  EXPECT_EQ(dict_size(d).text, "0");
  dict_put(d, Value("Word"), Value("meaning"));
  EXPECT_EQ(dict_get(d, Value("word"))->text, "meaning");
  EXPECT_EQ(dict_has_key(d, Value("WORD")).text, "yes");
  auto miss = dict_get(d, Value("other"));
  ASSERT_FALSE(miss);
  EXPECT_EQ(miss.error().code, DsErrorCode::KeyNotFound);
  EXPECT_EQ(miss.error().message, "Key not found");
  dict_put(d, Value("1.0"), Value("one"));
  EXPECT_EQ(dict_get(d, Value("1"))->text, "one");
  EXPECT_EQ(dict_size(d).text, "2");
  dict_remove(d, Value("absent"));
  EXPECT_EQ(dict_size(d).text, "2");
  dict_remove(d, Value("word"));
  EXPECT_EQ(dict_size(d).text, "1");
  EXPECT_EQ(dict_has_key(d, Value("word")).text, "no");
}

TEST(DictDs, RandomPutsKeepKeysDistinct) {
  oracle::Gen gen(24);
  DictDs d;
  for (int i = 0; i < 5000; ++i) {
    const Value k(gen.value()), v(gen.value());
    dict_put(d, k, v);
    ASSERT_EQ(dict_get(d, k)->text, v.text);
  }
  std::vector<Value> keys;
  for (const auto& [ck, kv] : d.pairs) keys.push_back(kv.first);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = i + 1; j < keys.size(); ++j) ASSERT_FALSE(equivalent(keys[i], keys[j]));
  }
}

TEST(Snapshot, ElementsPerFamily) {
  EXPECT_EQ(texts(ds_elements_snapshot(DsObject{array_of({"a", "b"})})), (Strings{"a", "b"}));
  DictDs d;
  dict_put(d, Value("x"), Value("1"));
  dict_put(d, Value("y"), Value("2"));
  EXPECT_EQ(texts(ds_elements_snapshot(DsObject{d})), (Strings{"x", "y"}));
  EXPECT_EQ(texts(ds_elements_snapshot(DsObject{set_of({"a", "B", "a"})})), (Strings{"a", "B"}));
}

TEST(Snapshot, IsDetached) {
  DsObject obj{array_of({"a"})};
  const auto snap = ds_elements_snapshot(obj);
  array_add(std::get<ArrayDs>(obj), Value("b"));
  EXPECT_EQ(texts(snap), Strings{"a"});
}

TEST(Registry, FirstIdFollowsSplitMix64) {
  std::uint64_t state = 0;
  const auto first = oracle::splitmix64(state);
  EXPECT_EQ(first, 0xe220a8397b1dcdafULL);
  Registry r(0);
  EXPECT_EQ(r.create(DsKind::Set), "set-" + oracle::hex8(static_cast<std::uint32_t>(first)));
  EXPECT_EQ(r.create(DsKind::Array), "array-" + oracle::hex8(static_cast<std::uint32_t>(oracle::splitmix64(state))));
}

TEST(Registry, OtherSeedsFollowSplitMix64) {
  for (std::uint64_t seed : {1ULL, 42ULL, 0xffffffffffffffffULL}) {
    std::uint64_t state = seed;
    Registry r(seed);
    for (int i = 0; i < 5; ++i) {
      EXPECT_EQ(r.create(DsKind::Dict), "dict-" + oracle::hex8(static_cast<std::uint32_t>(oracle::splitmix64(state))));
    }
  }
}

TEST(Registry, ResolveOutcomes) {
  Registry r(0);
  auto missing = r.resolve(Value("set-00000000"), DsKind::Set);
  ASSERT_FALSE(missing);
  EXPECT_EQ(missing.error().code, DsErrorCode::InvalidObject);
  EXPECT_EQ(missing.error().message, "Invalid Set");
  EXPECT_EQ(r.resolve(Value("hello"), DsKind::Array).error().message, "Invalid Array");
  EXPECT_EQ(r.resolve(Value(""), DsKind::Dict).error().message, "Invalid Dictionary");

  const auto dict = r.create(DsKind::Dict);
  auto mismatch = r.resolve(Value(dict), DsKind::Array);
  ASSERT_FALSE(mismatch);
  EXPECT_EQ(mismatch.error().code, DsErrorCode::KindMismatch);
  EXPECT_EQ(mismatch.error().message, "This block can only be used with Arrays");
  const auto arr = r.create(DsKind::Array);
  EXPECT_EQ(r.resolve(Value(arr), DsKind::Set).error().message, "This block can only be used with Sets");
  EXPECT_EQ(r.resolve(Value(arr), DsKind::Dict).error().message, "This block can only be used with Dictionaries");

  auto ok = r.resolve_as<ArrayDs>(Value(arr));
  ASSERT_TRUE(ok);
  EXPECT_TRUE((*ok)->items.empty());
  auto d = r.resolve_as<DictDs>(Value(dict));
  ASSERT_TRUE(d);
  EXPECT_EQ(dict_size(**d).text, "0");
}

TEST(Registry, IdsAreCaseSensitiveHandles) {
  Registry r(0);
  const auto id = r.create(DsKind::Set);
  std::string upper = id;
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  EXPECT_FALSE(r.resolve(Value(upper), DsKind::Set));
}

TEST(Registry, DeterministicAndDistinctOverAMillionDraws) {
  Registry a(7), b(7);
  std::unordered_set<std::string> seen;
  seen.reserve(1'000'000);
  for (int i = 0; i < 1'000'000; ++i) {
    const auto id = a.create(DsKind::Array);
    ASSERT_TRUE(seen.insert(id).second) << id;
    if (i < 1000) ASSERT_EQ(id, b.create(DsKind::Array));
  }
  EXPECT_GE(a.draws(), 1'000'000u);
  for (const auto& id : {*seen.begin()}) EXPECT_TRUE(parse_object_id(id).has_value());
}

TEST(Registry, ObjectIdGrammar) {
  EXPECT_EQ(parse_object_id("array-0123abcd"), DsKind::Array);
  EXPECT_EQ(parse_object_id("set-ffffffff"), DsKind::Set);
  EXPECT_EQ(parse_object_id("dict-00000000"), DsKind::Dict);
  for (const char* bad : {"array-0123ABCD", "list-00000000", "set-123", "set-000000000", "set00000000", ""}) {
    EXPECT_FALSE(parse_object_id(bad).has_value()) << bad;
  }
}

TEST(Registry, SnapshotInCreationOrder) {
  Registry r(0);
  const auto s = r.create(DsKind::Set);
  const auto d = r.create(DsKind::Dict);
  set_add(**r.resolve_as<SetDs>(Value(s)), Value("q"));
  dict_put(**r.resolve_as<DictDs>(Value(d)), Value("k"), Value("v"));
  const auto snap = r.snapshot();
  ASSERT_EQ(snap.size(), 2u);
  EXPECT_EQ(snap[0].id, s);
  EXPECT_EQ(texts(snap[0].elements), Strings{"q"});
  EXPECT_EQ(snap[1].kind, DsKind::Dict);
  ASSERT_EQ(snap[1].pairs.size(), 1u);
  EXPECT_EQ(snap[1].pairs[0].second.text, "v");
  const auto j = to_json(snap);
  EXPECT_EQ(j[0]["kind"], "set");
  EXPECT_EQ(j[1]["pairs"][0]["key"], "k");
}
