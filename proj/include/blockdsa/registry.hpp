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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "blockdsa/ds.hpp"
#include "blockdsa/ordered_map.hpp"
#include "blockdsa/result.hpp"
#include "blockdsa/value.hpp"
#include "json.hpp"

namespace blockdsa {

/// SplitMix64 (Steele, Lea, Flood). The seed is the initial state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Splits "<kind>-<8 lowercase hex>" into its family; nullopt when the text
/// does not follow the id grammar.
inline std::optional<DsKind> parse_object_id(std::string_view id) {
  auto dash = id.find('-');
  if (dash == std::string_view::npos || id.size() - dash - 1 != 8) return std::nullopt;
  for (char c : id.substr(dash + 1)) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return std::nullopt;
  }
  const auto prefix = id.substr(0, dash);
  for (DsKind k : {DsKind::Array, DsKind::Set, DsKind::Dict}) {
    if (prefix == id_prefix(k)) return k;
  }
  return std::nullopt;
}

struct ObjectSnapshot {
  std::string id;
  DsKind kind;
  std::vector<Value> elements;                  // arrays and sets
  std::vector<std::pair<Value, Value>> pairs;   // dictionaries
};

/// Session-local table from opaque id text to live data structures.
///
/// Ids are a pure function of (seed, number of draws): draw k yields
/// "<kind>-" + low 32 bits of the k-th SplitMix64 output in hex. A draw whose
/// hex part was already issued is discarded and the next one is taken, so ids
/// are never reused within a registry.
class Registry {
 public:
  explicit Registry(std::uint64_t seed = 0) : seed_(seed), rng_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }
  std::size_t size() const { return objects_.size(); }

  std::string create(DsKind kind) {
    std::string id = fresh_id(kind);
    switch (kind) {
      case DsKind::Array: objects_.try_emplace(id, ArrayDs{}); break;
      case DsKind::Set: objects_.try_emplace(id, SetDs{}); break;
      case DsKind::Dict: objects_.try_emplace(id, DictDs{}); break;
    }
    return id;
  }

  /// Registers an already-built object (used by set algebra results).
  std::string adopt(DsObject obj) {
    std::string id = fresh_id(kind_of(obj));
    objects_.try_emplace(id, std::move(obj));
    return id;
  }

  /// Looks up `id` expecting family `expected`: absent or malformed ids give
  /// "Invalid <Family>", a live id of another family gives "This block can
  /// only be used with <Families>".
  Result<DsObject*> resolve(const Value& id, DsKind expected) {
    auto it = objects_.find(id.text);
    if (it == objects_.end()) {
      return DsError{DsErrorCode::InvalidObject, invalid_object_message(expected)};
    }
    if (kind_of(it->second) != expected) {
      return DsError{DsErrorCode::KindMismatch, kind_mismatch_message(expected)};
    }
    return &it->second;
  }

  template <class Ds>
  Result<Ds*> resolve_as(const Value& id) {
    auto r = resolve(id, Ds::kind);
    if (!r) return r.error();
    return &std::get<Ds>(**r);
  }

  /// Any family; used by for-each.
  DsObject* find(const Value& id) {
    auto it = objects_.find(id.text);
    return it == objects_.end() ? nullptr : &it->second;
  }
  const DsObject* find(const Value& id) const {
    auto it = objects_.find(id.text);
    return it == objects_.end() ? nullptr : &it->second;
  }

  /// Every object in creation order.
  std::vector<ObjectSnapshot> snapshot() const {
    std::vector<ObjectSnapshot> out;
    out.reserve(objects_.size());
    for (const auto& [id, obj] : objects_) {
      ObjectSnapshot s{id, kind_of(obj), {}, {}};
      if (const auto* d = std::get_if<DictDs>(&obj)) {
        for (const auto& [k, kv] : d->pairs) s.pairs.push_back(kv);
      } else {
        s.elements = ds_elements_snapshot(obj);
      }
      out.push_back(std::move(s));
    }
    return out;
  }

 private:
  std::string fresh_id(DsKind kind) {
    static constexpr char kHex[] = "0123456789abcdef";
    for (;;) {
      const auto low = static_cast<std::uint32_t>(rng_.next());
      ++draws_;
      std::string hex(8, '0');
      for (int i = 7, v = 0; i >= 0; --i, ++v) hex[static_cast<std::size_t>(i)] = kHex[(low >> (4 * v)) & 0xf];
      if (issued_.insert(hex).second) return std::string(id_prefix(kind)) + "-" + hex;
    }
  }

  std::uint64_t seed_;
  SplitMix64 rng_;
  std::uint64_t draws_ = 0;
  std::unordered_set<std::string> issued_;
  insertion_ordered_map<std::string, DsObject> objects_;
};

inline nlohmann::ordered_json to_json(const std::vector<ObjectSnapshot>& snap) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : snap) {
    nlohmann::ordered_json o;
    o["id"] = s.id;
    o["kind"] = std::string(id_prefix(s.kind));
    if (s.kind == DsKind::Dict) {
      auto pairs = nlohmann::ordered_json::array();
      for (const auto& [k, v] : s.pairs) {
        nlohmann::ordered_json p;
        p["key"] = k.text;
        p["value"] = v.text;
        pairs.push_back(std::move(p));
      }
      o["pairs"] = std::move(pairs);
    } else {
      auto els = nlohmann::ordered_json::array();
      for (const auto& v : s.elements) els.push_back(v.text);
      o["elements"] = std::move(els);
    }
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace blockdsa
