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
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "blockdsa/ordered_map.hpp"
#include "blockdsa/sort.hpp"
#include "blockdsa/value.hpp"
#include "support/oracles.hpp"

using namespace blockdsa;

namespace {

int sign(std::strong_ordering o) { return o < 0 ? -1 : o > 0 ? 1 : 0; }

}  // namespace

TEST(Canon, NumericSpellingsAreEquivalent) {
  EXPECT_EQ(canon("1.0"), canon("1"));
  EXPECT_TRUE(canon("1").is_number());
  EXPECT_EQ(canon("1.0").number, 1.0);
  EXPECT_EQ(canon("-0"), canon("0"));
  EXPECT_EQ(canon("1e2"), canon("100"));
  EXPECT_EQ(canon(".5"), canon("0.5"));
  EXPECT_EQ(canon("5."), canon("5"));
  EXPECT_EQ(canon("+7"), canon("7"));
}

TEST(Canon, TextFoldsCase) {
  EXPECT_EQ(canon("Apple"), canon("apple"));
  EXPECT_FALSE(canon("Apple").is_number());
  EXPECT_EQ(canon("Apple").text, "apple");
}

TEST(Canon, SurroundingSpaceIsText) {
  const auto k = canon(" 5");
  EXPECT_FALSE(k.is_number());
  EXPECT_EQ(k.text, " 5");
  EXPECT_NE(canon(" 5"), canon("5"));
  EXPECT_FALSE(canon("5 ").is_number());
}

TEST(Canon, GrammarEdges) {
  for (const char* text : {"", "-", "+", ".", "1e", "e5", "0x10", "inf", "nan", "Infinity", "1e999", "1,5", "--1", "1.2.3"}) {
    EXPECT_FALSE(canon(text).is_number()) << text;
  }
  for (const char* text : {"0", "007", "-3.25", "1E3", "2e-3", "1e-400", "123456789012345678901234567890"}) {
    EXPECT_TRUE(canon(text).is_number()) << text;
  }
}

TEST(Canon, AgreesWithRegexOracle) {
  oracle::Gen gen(11);
  for (int i = 0; i < 20000; ++i) {
    const auto s = gen.value();
    double want = 0;
    const bool is_num = oracle::is_number(s, &want);
    const auto k = canon(s);
    ASSERT_EQ(k.is_number(), is_num) << '"' << s << '"';
    if (is_num) ASSERT_EQ(k.number, want) << s;
    else ASSERT_EQ(k.text, oracle::lower(s));
  }
}

TEST(Compare, Examples) {
  EXPECT_TRUE(compare(Value("9"), Value("10")) < 0);
  EXPECT_TRUE(compare(Value("apple"), Value("Banana")) < 0);
  EXPECT_TRUE(compare(Value("10"), Value("apple")) < 0);
  EXPECT_TRUE(compare(Value("1.0"), Value("1")) == 0);
  EXPECT_TRUE(compare(Value("YES"), Value("yes")) == 0);
  EXPECT_TRUE(compare(Value(" 5"), Value("99999")) > 0);
}

TEST(Compare, MatchesOracleAndIsATotalOrder) {
  oracle::Gen gen(12);
  for (int i = 0; i < 20000; ++i) {
    const Value a(gen.value()), b(gen.value()), c(gen.value());
    const int ab = sign(compare(a, b));
    ASSERT_EQ(ab, oracle::cmp(a.text, b.text)) << a.text << " vs " << b.text;
    ASSERT_EQ(ab, -sign(compare(b, a)));
    ASSERT_EQ(ab == 0, equivalent(a, b));
    const int bc = sign(compare(b, c));
    if (ab <= 0 && bc <= 0) ASSERT_LE(sign(compare(a, c)), 0) << a.text << " " << b.text << " " << c.text;
    if (ab >= 0 && bc >= 0) ASSERT_GE(sign(compare(a, c)), 0) << a.text << " " << b.text << " " << c.text;
  }
}

TEST(Compare, EquivalentKeysHashAlike) {
  CanonKeyHash h;
  EXPECT_EQ(h(canon("1")), h(canon("1.000")));
  EXPECT_EQ(h(canon("0")), h(canon("-0.0")));
  EXPECT_EQ(h(canon("ABC")), h(canon("abc")));
}

TEST(Format, Numbers) {
  EXPECT_EQ(format_number(3), "3");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(format_number(2.5), "2.5");
  EXPECT_EQ(format_number(1e21), "1e+21");
  EXPECT_EQ(Value::boolean(true).text, "yes");
  EXPECT_EQ(Value::boolean(false).text, "no");
  for (double d : {1.5, -7.0, 1e-7, 123456.789, 3.0e100}) EXPECT_EQ(*parse_number(format_number(d)), d);
}

TEST(Format, ToNumberTreatsTextAsZero) {
  EXPECT_EQ(to_number(Value("hello")), 0.0);
  EXPECT_EQ(to_number(Value("")), 0.0);
  EXPECT_EQ(to_number(Value("4.5")), 4.5);
  EXPECT_TRUE(is_yes(Value("YES")));
  EXPECT_FALSE(is_yes(Value("true")));
}

TEST(OrderedMap, KeepsInsertionOrderAndFirstSlot) {
  insertion_ordered_map<std::string, int> m;
  EXPECT_TRUE(m.try_emplace("b", 1).second);
  EXPECT_TRUE(m.try_emplace("a", 2).second);
  EXPECT_FALSE(m.try_emplace("b", 3).second);
  m.insert_or_assign("a", 20);
  m.insert_or_assign("c", 30);
  std::vector<std::pair<std::string, int>> got(m.begin(), m.end());
  EXPECT_EQ(got, (std::vector<std::pair<std::string, int>>{{"b", 1}, {"a", 20}, {"c", 30}}));
  EXPECT_EQ(m.erase("a"), 1u);
  EXPECT_EQ(m.erase("a"), 0u);
  ASSERT_NE(m.find("c"), m.end());
  EXPECT_EQ(m.find("c")->second, 30);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_TRUE(m.contains("b"));
  EXPECT_FALSE(m.contains("a"));
}

TEST(OrderedMap, RandomOperationsMatchVectorModel) {
  std::mt19937 rng(5);
  insertion_ordered_map<int, int> m;
  std::vector<std::pair<int, int>> model;
  for (int step = 0; step < 20000; ++step) {
    const int key = static_cast<int>(rng() % 64);
    const int op = static_cast<int>(rng() % 3);
    auto it = std::find_if(model.begin(), model.end(), [&](auto& p) { return p.first == key; });
    if (op == 0) {
      m.try_emplace(key, step);
      if (it == model.end()) model.emplace_back(key, step);
    } else if (op == 1) {
      m.insert_or_assign(key, step);
      if (it == model.end()) model.emplace_back(key, step);
      else it->second = step;
    } else {
      m.erase(key);
      if (it != model.end()) model.erase(it);
    }
    if (step % 97 == 0) ASSERT_EQ((std::vector<std::pair<int, int>>(m.begin(), m.end())), model);
  }
  EXPECT_EQ((std::vector<std::pair<int, int>>(m.begin(), m.end())), model);
}

TEST(Quicksort, MatchesStdSortOnIntegers) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> v(rng() % 300);
    const int range = 1 + static_cast<int>(rng() % 50);
    for (auto& x : v) x = static_cast<int>(rng() % static_cast<unsigned>(range));
    auto want = v;
    std::sort(want.begin(), want.end());
    quicksort(v.begin(), v.end(), std::less<>{});
    ASSERT_EQ(v, want);
  }
}

TEST(Quicksort, AdversarialShapes) {
  const int n = 5000;
  std::vector<std::vector<int>> shapes;
  std::vector<int> asc(n), desc(n), same(n, 4), organ(n), saw(n);
  std::iota(asc.begin(), asc.end(), 0);
  std::iota(desc.rbegin(), desc.rend(), 0);
  for (int i = 0; i < n; ++i) organ[static_cast<std::size_t>(i)] = i < n / 2 ? i : n - i;
  for (int i = 0; i < n; ++i) saw[static_cast<std::size_t>(i)] = i % 17;
  for (auto v : {asc, desc, same, organ, saw}) {
    auto want = v;
    std::sort(want.begin(), want.end());
    quicksort(v.begin(), v.end(), std::less<>{});
    EXPECT_EQ(v, want);
  }
}

TEST(BinarySearch, LowerBoundAgreesWithStd) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> v(rng() % 100);
    for (auto& x : v) x = static_cast<int>(rng() % 40);
    std::sort(v.begin(), v.end());
    const int probe = static_cast<int>(rng() % 45) - 2;
    auto got = binary_search_lower(v.begin(), v.end(), probe, [](int e, int p) { return e < p; });
    ASSERT_EQ(got, std::lower_bound(v.begin(), v.end(), probe));
  }
}
