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

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "blockdsa/ordered_map.hpp"
#include "blockdsa/result.hpp"
#include "blockdsa/sort.hpp"
#include "blockdsa/value.hpp"

namespace blockdsa {

enum class DsKind { Array, Set, Dict };

/// Prefix used in object ids and registry snapshots.
inline std::string_view id_prefix(DsKind k) {
  switch (k) {
    case DsKind::Array: return "array";
    case DsKind::Set: return "set";
    case DsKind::Dict: return "dict";
  }
  return "array";
}

/// Catalog spelling ("ARRAY", "SET", "DICT").
inline std::string_view catalog_name(DsKind k) {
  switch (k) {
    case DsKind::Array: return "ARRAY";
    case DsKind::Set: return "SET";
    case DsKind::Dict: return "DICT";
  }
  return "ARRAY";
}

inline std::string_view display_name(DsKind k) {
  switch (k) {
    case DsKind::Array: return "Array";
    case DsKind::Set: return "Set";
    case DsKind::Dict: return "Dictionary";
  }
  return "Array";
}

inline std::string_view plural_name(DsKind k) {
  switch (k) {
    case DsKind::Array: return "Arrays";
    case DsKind::Set: return "Sets";
    case DsKind::Dict: return "Dictionaries";
  }
  return "Arrays";
}

inline std::string invalid_object_message(DsKind k) {
  return "Invalid " + std::string(display_name(k));
}

inline std::string kind_mismatch_message(DsKind k) {
  return "This block can only be used with " + std::string(plural_name(k));
}

inline constexpr std::string_view kIndexOutOfRange = "Index out of range";
inline constexpr std::string_view kKeyNotFound = "Key not found";
inline constexpr std::string_view kNotFound = "not found";

// --- Array ------------------------------------------------------------------

struct ArrayDs {
  static constexpr DsKind kind = DsKind::Array;
  std::vector<Value> items;
};

enum class SortDirection { Ascending, Descending };

inline void array_add(ArrayDs& a, Value v) { a.items.push_back(std::move(v)); }

/// 1-based access; the index must be a whole number in [1, length].
inline Result<Value> array_item_at(const ArrayDs& a, const Value& index) {
  const auto n = parse_number(index.text);
  if (!n || *n != std::floor(*n) || *n < 1 || *n > static_cast<double>(a.items.size())) {
    return DsError{DsErrorCode::IndexOutOfRange, std::string(kIndexOutOfRange)};
  }
  return a.items[static_cast<std::size_t>(*n) - 1];
}

inline Value array_length(const ArrayDs& a) { return Value::number(static_cast<double>(a.items.size())); }

namespace detail {

inline std::vector<CanonKey> canon_keys(const std::vector<Value>& items) {
  std::vector<CanonKey> keys;
  keys.reserve(items.size());
  for (const auto& v : items) keys.push_back(canon(v));
  return keys;
}

// Index permutation of `keys` ordered by (key, original position), ascending
// or descending in key; ties always resolve by ascending position.
inline std::vector<std::size_t> sorted_permutation(const std::vector<CanonKey>& keys, SortDirection dir) {
  std::vector<std::size_t> perm(keys.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (dir == SortDirection::Ascending) {
    quicksort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      const auto c = keys[a] <=> keys[b];
      return c != 0 ? c < 0 : a < b;
    });
  } else {
    quicksort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      const auto c = keys[b] <=> keys[a];
      return c != 0 ? c < 0 : a < b;
    });
  }
  return perm;
}

}  // namespace detail

/// In-place quicksort under compare(); equal items keep their relative order.
inline void array_sort(ArrayDs& a, SortDirection dir) {
  const auto keys = detail::canon_keys(a.items);
  const auto perm = detail::sorted_permutation(keys, dir);
  std::vector<Value> out;
  out.reserve(a.items.size());
  for (std::size_t i : perm) out.push_back(std::move(a.items[i]));
  a.items = std::move(out);
}

/// Comma-separated ascending 1-based positions of every item equivalent to
/// `target`, or "not found". The array itself is left untouched: an index
/// permutation is sorted and binary-searched instead.
inline Value array_search(const ArrayDs& a, const Value& target) {
  const auto keys = detail::canon_keys(a.items);
  const auto perm = detail::sorted_permutation(keys, SortDirection::Ascending);
  const CanonKey probe = canon(target);

  auto it = binary_search_lower(perm.begin(), perm.end(), probe,
                                [&](std::size_t idx, const CanonKey& p) { return keys[idx] < p; });
  // The run of equal keys is already in ascending position order.
  std::string out;
  for (; it != perm.end() && keys[*it] == probe; ++it) {
    if (!out.empty()) out += ',';
    out += std::to_string(*it + 1);
  }
  return out.empty() ? Value(kNotFound) : Value(std::move(out));
}

// --- Set --------------------------------------------------------------------

/// Deduplicated collection in insertion order; membership is canon().
struct SetDs {
  static constexpr DsKind kind = DsKind::Set;
  insertion_ordered_map<CanonKey, Value, CanonKeyHash> members;

  std::vector<Value> items() const {
    std::vector<Value> out;
    out.reserve(members.size());
    for (const auto& [k, v] : members) out.push_back(v);
    return out;
  }
};

inline void set_add(SetDs& s, Value v) {
  auto key = canon(v);
  s.members.try_emplace(std::move(key), std::move(v));
}

inline Value set_is_empty(const SetDs& s) { return Value::boolean(s.members.empty()); }

inline Value set_contains(const SetDs& s, const Value& element) {
  return Value::boolean(s.members.contains(canon(element)));
}

inline Value set_size(const SetDs& s) { return Value::number(static_cast<double>(s.members.size())); }

enum class SetOp { Union, Intersection, Difference };

/// Pure set algebra; both inputs are left unmodified. Members keep the left
/// operand's order, with UNION appending right-only members afterwards.
inline SetDs set_combine(const SetDs& left, const SetDs& right, SetOp op) {
  SetDs out;
  for (const auto& [k, v] : left.members) {
    const bool in_right = right.members.contains(k);
    if (op == SetOp::Union || (op == SetOp::Intersection) == in_right) out.members.try_emplace(k, v);
  }
  if (op == SetOp::Union) {
    for (const auto& [k, v] : right.members) out.members.try_emplace(k, v);
  }
  return out;
}

// --- Dictionary -------------------------------------------------------------

struct DictDs {
  static constexpr DsKind kind = DsKind::Dict;
  // canon(key) -> (key as first written, value)
  insertion_ordered_map<CanonKey, std::pair<Value, Value>, CanonKeyHash> pairs;
};

/// Replace-on-duplicate: an equivalent key keeps its slot and original
/// spelling, only the value changes.
inline void dict_put(DictDs& d, Value key, Value value) {
  auto k = canon(key);
  if (auto it = d.pairs.find(k); it != d.pairs.end()) {
    it->second.second = std::move(value);
    return;
  }
  d.pairs.try_emplace(std::move(k), std::pair{std::move(key), std::move(value)});
}

inline Result<Value> dict_get(const DictDs& d, const Value& key) {
  auto it = d.pairs.find(canon(key));
  if (it == d.pairs.end()) return DsError{DsErrorCode::KeyNotFound, std::string(kKeyNotFound)};
  return it->second.second;
}

inline Value dict_has_key(const DictDs& d, const Value& key) {
  return Value::boolean(d.pairs.contains(canon(key)));
}

inline void dict_remove(DictDs& d, const Value& key) { d.pairs.erase(canon(key)); }

inline Value dict_size(const DictDs& d) { return Value::number(static_cast<double>(d.pairs.size())); }

// --- Any structure ----------------------------------------------------------

using DsObject = std::variant<ArrayDs, SetDs, DictDs>;

inline DsKind kind_of(const DsObject& obj) {
  return std::visit([](const auto& ds) { return std::decay_t<decltype(ds)>::kind; }, obj);
}

/// Detached copy of what a for-each loop visits: array items, set members,
/// or dictionary keys, all in order.
inline std::vector<Value> ds_elements_snapshot(const DsObject& obj) {
  struct Visitor {
    std::vector<Value> operator()(const ArrayDs& a) const { return a.items; }
    std::vector<Value> operator()(const SetDs& s) const { return s.items(); }
    std::vector<Value> operator()(const DictDs& d) const {
      std::vector<Value> keys;
      keys.reserve(d.pairs.size());
      for (const auto& [k, kv] : d.pairs) keys.push_back(kv.first);
      return keys;
    }
  };
  return std::visit(Visitor{}, obj);
}

}  // namespace blockdsa
