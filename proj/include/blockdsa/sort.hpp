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
#include <iterator>
#include <utility>

namespace blockdsa {

namespace detail {

inline constexpr std::ptrdiff_t kInsertionSortCutoff = 16;

template <std::random_access_iterator It, class Less>
void insertion_sort(It first, It last, Less& less) {
  if (first == last) return;
  for (It i = std::next(first); i != last; ++i) {
    auto v = std::move(*i);
    It j = i;
    for (; j != first && less(v, *std::prev(j)); --j) *j = std::move(*std::prev(j));
    *j = std::move(v);
  }
}

// Orders *a, *b, *c and returns b, which then holds the median.
template <std::random_access_iterator It, class Less>
It median_of_three(It a, It b, It c, Less& less) {
  using std::iter_swap;
  if (less(*b, *a)) iter_swap(a, b);
  if (less(*c, *b)) {
    iter_swap(b, c);
    if (less(*b, *a)) iter_swap(a, b);
  }
  return b;
}

}  // namespace detail

/// Quicksort with a median-of-three pivot.
///
/// Recurses into the smaller partition and loops over the larger one, so the
/// stack depth stays O(log n). Not stable: callers wanting a stable outcome
/// must make keys distinct (e.g. by appending the original position).
template <std::random_access_iterator It, class Less>
void quicksort(It first, It last, Less less) {
  using std::iter_swap;
  while (last - first > detail::kInsertionSortCutoff) {
    It mid = first + (last - first) / 2;
    detail::median_of_three(first, mid, std::prev(last), less);
    // Park the pivot just before the last element; first and last-1 act as
    // sentinels for the scans below.
    It pivot = std::prev(last, 2);
    iter_swap(mid, pivot);

    It i = first;
    It j = pivot;
    for (;;) {
      while (less(*++i, *pivot)) {}
      while (less(*pivot, *--j)) {}
      if (!(i < j)) break;
      iter_swap(i, j);
    }
    iter_swap(i, pivot);

    if (i - first < last - i) {
      quicksort(first, i, less);
      first = std::next(i);
    } else {
      quicksort(std::next(i), last, less);
      last = i;
    }
  }
  detail::insertion_sort(first, last, less);
}

/// First position in the sorted range [first, last) whose element is not
/// less than the probe, under a heterogeneous comparison
/// `element_less(element, probe)`.
template <std::random_access_iterator It, class Probe, class ElementLess>
It binary_search_lower(It first, It last, const Probe& probe, ElementLess element_less) {
  auto count = last - first;
  while (count > 0) {
    auto half = count / 2;
    It mid = first + half;
    if (element_less(*mid, probe)) {
      first = std::next(mid);
      count -= half + 1;
    } else {
      count = half;
    }
  }
  return first;
}

}  // namespace blockdsa
