#include "bss/rational.hpp"

#include <charconv>
#include <mutex>
#include <numeric>
#include <vector>

#include "bss/error.hpp"

namespace bss {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "rational multiply");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "rational add");
  return r;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::SyntaxError, "bad rational literal '" + std::string(s) + "'");
  return v;
}

}  // namespace

Rational::Rational(std::int64_t n) : num_(n), den_(1) {}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  if (d < 0) {
    n = checked_mul(n, -1);
    d = checked_mul(d, -1);
  }
  std::int64_t g = std::gcd(n, d);
  if (g == 0) g = 1;
  num_ = n / g;
  den_ = d / g;
}

Rational operator+(const Rational& a, const Rational& b) {
  std::int64_t g = std::gcd(a.den_, b.den_);
  std::int64_t l = checked_mul(a.den_ / g, b.den_);
  return Rational(checked_add(checked_mul(a.num_, l / a.den_), checked_mul(b.num_, l / b.den_)), l);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  std::int64_t g1 = std::gcd(a.num_, b.den_);
  std::int64_t g2 = std::gcd(b.num_, a.den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorKind::InvalidArgument, "division by zero");
  return a * Rational(b.den_, b.num_);
}

Rational Rational::operator-() const { return Rational(checked_mul(num_, -1), den_); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  return l <=> r;
}

std::int64_t Rational::height() const { return (num_ < 0 ? -num_ : num_) + den_; }

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

bool enum_less(const Rational& a, const Rational& b) {
  auto ha = a.height(), hb = b.height();
  if (ha != hb) return ha < hb;
  if (a.den() != b.den()) return a.den() < b.den();
  return a.num() > b.num();
}

namespace {

std::mutex g_enum_mutex;
std::vector<Rational> g_enum{Rational(0)};
std::int64_t g_enum_height = 1;

void extend_to(std::size_t k) {
  while (g_enum.size() <= k) {
    std::int64_t h = ++g_enum_height;
    for (std::int64_t q = 1; q < h; ++q) {
      std::int64_t p = h - q;
      if (std::gcd(p, q) != 1) continue;
      g_enum.emplace_back(p, q);
      g_enum.emplace_back(-p, q);
    }
  }
}

}  // namespace

Rational rational_at(std::size_t k) {
  std::lock_guard<std::mutex> lock(g_enum_mutex);
  extend_to(k);
  return g_enum[k];
}

std::size_t rational_index(const Rational& r) {
  if (r.num() == 0) return 0;
  std::size_t k = 1;
  for (std::int64_t h = 2; h < r.height(); ++h)
    for (std::int64_t q = 1; q < h; ++q)
      if (std::gcd(h - q, q) == 1) k += 2;
  for (std::int64_t q = 1; q < r.den(); ++q)
    if (std::gcd(r.height() - q, q) == 1) k += 2;
  return r.num() > 0 ? k : k + 1;
}

}  // namespace bss
