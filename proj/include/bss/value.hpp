#pragma once

#include <compare>
#include <cstdint>
#include <variant>
#include <vector>

#include "bss/rational.hpp"

namespace bss {

// Element of a finite structure, identified by its position in the universe list.
struct Element {
  std::uint32_t index = 0;
  friend auto operator<=>(const Element&, const Element&) = default;
};

// A universe element. Ordering is the canonical (enumeration) order: rationals
// by zig-zag position, finite elements by index, rationals first.
class Value {
 public:
  Value() = default;
  Value(Rational r) : v_(r) {}  // NOLINT(google-explicit-constructor)
  Value(Element e) : v_(e) {}   // NOLINT(google-explicit-constructor)

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  Element element() const { return std::get<Element>(v_); }

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  std::variant<Rational, Element> v_;
};

using Tuple = std::vector<Value>;

}  // namespace bss
