#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace bss {

// Exact fraction in lowest terms with a positive denominator. Arithmetic
// throws Error(Overflow) instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t n);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  // Numeric order.
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  // |p| + q, the enumeration height.
  std::int64_t height() const;

  std::string str() const;
  static Rational parse(std::string_view text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Position order of the zig-zag enumeration: 0, then by height |p|+q, then by
// denominator, positive before negative.
bool enum_less(const Rational& a, const Rational& b);

// k-th rational of the zig-zag enumeration (k = 0 gives 0).
Rational rational_at(std::size_t k);

// Inverse of rational_at.
std::size_t rational_index(const Rational& r);

}  // namespace bss
