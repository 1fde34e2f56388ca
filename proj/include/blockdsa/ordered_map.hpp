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

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace blockdsa {

/// Hash map that iterates in insertion order.
///
/// Entries live contiguously in a vector; a side table maps each key to its
/// slot. Lookup and append are O(1) on average. erase() keeps the remaining
/// entries in order and is O(n), which is fine for the collection sizes a
/// block program builds.
template <class Key, class T, class Hash = std::hash<Key>, class KeyEqual = std::equal_to<Key>>
class insertion_ordered_map {
 public:
  using value_type = std::pair<Key, T>;
  using container_type = std::vector<value_type>;
  using iterator = typename container_type::iterator;
  using const_iterator = typename container_type::const_iterator;
  using size_type = std::size_t;

  insertion_ordered_map() = default;

  size_type size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  iterator begin() noexcept { return entries_.begin(); }
  iterator end() noexcept { return entries_.end(); }
  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }

  const container_type& entries() const noexcept { return entries_; }

  bool contains(const Key& key) const { return index_.find(key) != index_.end(); }

  iterator find(const Key& key) {
    auto it = index_.find(key);
    return it == index_.end() ? end() : begin() + static_cast<std::ptrdiff_t>(it->second);
  }
  const_iterator find(const Key& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? end() : begin() + static_cast<std::ptrdiff_t>(it->second);
  }

  /// Appends (key, value) unless an equal key is present. Returns the slot and
  /// whether an insertion happened; an existing entry is left untouched.
  std::pair<iterator, bool> try_emplace(Key key, T value) {
    if (auto it = index_.find(key); it != index_.end()) {
      return {begin() + static_cast<std::ptrdiff_t>(it->second), false};
    }
    index_.emplace(key, entries_.size());
    entries_.emplace_back(std::move(key), std::move(value));
    return {std::prev(end()), true};
  }

  /// Replaces the mapped value in place when the key exists (position kept),
  /// otherwise appends.
  std::pair<iterator, bool> insert_or_assign(Key key, T value) {
    if (auto it = index_.find(key); it != index_.end()) {
      auto slot = begin() + static_cast<std::ptrdiff_t>(it->second);
      slot->second = std::move(value);
      return {slot, false};
    }
    return try_emplace(std::move(key), std::move(value));
  }

  size_type erase(const Key& key) {
    auto it = index_.find(key);
    if (it == index_.end()) return 0;
    const size_type pos = it->second;
    index_.erase(it);
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(pos));
    for (auto& [k, slot] : index_) {
      if (slot > pos) --slot;
    }
    return 1;
  }

  void clear() noexcept {
    entries_.clear();
    index_.clear();
  }

 private:
  container_type entries_;
  std::unordered_map<Key, size_type, Hash, KeyEqual> index_;
};

}  // namespace blockdsa
