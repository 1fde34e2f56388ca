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

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace blockdsa {

/// A runtime scalar. Every value travels as text, exactly like the untyped
/// input fields of a block editor; numbers and booleans have canonical text
/// forms (see format_number and Value::boolean).
struct Value {
  std::string text;

  Value() = default;
  explicit Value(std::string t) : text(std::move(t)) {}
  explicit Value(std::string_view t) : text(t) {}
  explicit Value(const char* t) : text(t) {}

  static Value number(double d);
  static Value boolean(bool b) { return Value(b ? "yes" : "no"); }

  friend bool operator==(const Value&, const Value&) = default;
};

inline constexpr std::string_view kYes = "yes";
inline constexpr std::string_view kNo = "no";

/// Shortest text that round-trips to the same double. Whole numbers print
/// without a fraction ("3", not "3.0"); negative zero prints as "0".
inline std::string format_number(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  if (d == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, end);
}

inline Value Value::number(double d) { return Value(format_number(d)); }

/// Decimal literal grammar: optional sign, digits with optional fraction
/// (or a bare fraction), optional exponent. No surrounding whitespace, no
/// hex, no inf/nan. Out-of-range magnitudes are rejected.
inline std::optional<double> parse_number(std::string_view s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto digit = [&](std::size_t k) { return k < n && s[k] >= '0' && s[k] <= '9'; };

  if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
  const std::size_t mantissa = i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (digit(i)) { ++i; ++int_digits; }
  if (i < n && s[i] == '.') {
    ++i;
    while (digit(i)) { ++i; ++frac_digits; }
  }
  if (int_digits + frac_digits == 0) return std::nullopt;
  if (i < n && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
    if (!digit(i)) return std::nullopt;
    while (digit(i)) ++i;
  }
  if (i != n) return std::nullopt;

  // from_chars takes neither a leading '+' nor a trailing '.', so hand it a
  // normalized copy.
  std::string body(s.substr(mantissa));
  if (auto dot = body.find('.'); dot != std::string::npos) {
    const bool frac_empty = dot + 1 == body.size() || body[dot + 1] == 'e' || body[dot + 1] == 'E';
    if (frac_empty) body.erase(dot, 1);
    else if (dot == 0) body.insert(0, "0");
  }
  double out = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
  if (ec == std::errc::result_out_of_range) {
    // Underflow rounds to zero or a subnormal; overflow is not a number.
    out = std::strtod(body.c_str(), nullptr);
  } else if (ec != std::errc() || ptr != body.data() + body.size()) {
    return std::nullopt;
  }
  if (!std::isfinite(out)) return std::nullopt;
  if (s[0] == '-') out = -out;
  if (out == 0.0) out = 0.0;  // fold -0
  return out;
}

inline std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

/// Equivalence key underlying equality, set membership, and dictionary keys:
/// numeric text compares by value, everything else case-insensitively.
struct CanonKey {
  enum class Tag { Num, Text };
  Tag tag = Tag::Text;
  double number = 0;
  std::string text;

  static CanonKey num(double d) { return {Tag::Num, d == 0.0 ? 0.0 : d, {}}; }
  static CanonKey txt(std::string s) { return {Tag::Text, 0, std::move(s)}; }

  bool is_number() const { return tag == Tag::Num; }

  friend bool operator==(const CanonKey& a, const CanonKey& b) {
    if (a.tag != b.tag) return false;
    return a.tag == Tag::Num ? a.number == b.number : a.text == b.text;
  }

  /// Numbers first (by value), then text by byte order of the folded form.
  /// UTF-8 byte order coincides with code-point order.
  friend std::strong_ordering operator<=>(const CanonKey& a, const CanonKey& b) {
    if (a.tag != b.tag) {
      return a.tag == Tag::Num ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.tag == Tag::Num) {
      if (a.number < b.number) return std::strong_ordering::less;
      if (a.number > b.number) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    const int c = a.text.compare(b.text);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
};

struct CanonKeyHash {
  std::size_t operator()(const CanonKey& k) const noexcept {
    if (k.is_number()) return std::hash<double>{}(k.number) ^ 0x9e3779b97f4a7c15ULL;
    return std::hash<std::string>{}(k.text);
  }
};

inline CanonKey canon(std::string_view payload) {
  if (auto d = parse_number(payload)) return CanonKey::num(*d);
  return CanonKey::txt(fold_case(payload));
}

inline CanonKey canon(const Value& v) { return canon(v.text); }

inline std::strong_ordering compare(const Value& a, const Value& b) { return canon(a) <=> canon(b); }

inline bool equivalent(const Value& a, const Value& b) { return canon(a) == canon(b); }

/// Numeric reading used by arithmetic blocks: non-numeric text counts as 0.
inline double to_number(const Value& v) { return parse_number(v.text).value_or(0.0); }

inline bool is_yes(const Value& v) { return fold_case(v.text) == kYes; }

}  // namespace blockdsa
