#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skytrav {

// Exact rational on int64, always normalized with a positive denominator.
// Cost levels, budgets and increments are all small, so int64 with __int128
// intermediates is plenty; overflow throws instead of wrapping.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  // Accepts decimal literals ("2", "-0.75") and fractions ("3/2").
  static std::optional<Rational> try_parse(std::string_view text);
  static Rational parse(std::string_view text) {
    auto r = try_parse(text);
    if (!r) throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
    return *r;
  }

  // Exact decimal rendering when the denominator is of the form 2^a*5^b,
  // "num/den" otherwise.
  std::string str() const;

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const i128 lhs = i128(a.num_) * b.den_;
    const i128 rhs = i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // floor(a / b) for b > 0; used for the step bound.
  static std::int64_t floor_div(const Rational& a, const Rational& b) {
    if (b.num_ <= 0) throw std::invalid_argument("floor_div by non-positive rational");
    const i128 n = i128(a.num_) * b.den_;
    const i128 d = i128(a.den_) * b.num_;
    i128 q = n / d;
    if (n % d != 0 && (n < 0)) --q;
    return narrow(q);
  }

 private:
  using i128 = __int128;

  static std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
    return static_cast<std::int64_t>(v);
  }

  static Rational from_i128(i128 num, i128 den) {
    if (den < 0) { num = -num; den = -den; }
    const i128 g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    Rational r;
    r.num_ = narrow(num);
    r.den_ = narrow(den);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) { const i128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline std::optional<Rational> Rational::try_parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto digits = [&](std::string_view s, std::int64_t& out) -> bool {
    if (s.empty()) return false;
    i128 v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
      v = v * 10 + (c - '0');
      if (v > INT64_MAX) return false;
    }
    out = static_cast<std::int64_t>(v);
    return true;
  };

  const std::string_view body = text.substr(pos);
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::int64_t num = 0, den = 0;
    if (!digits(body.substr(0, slash), num) || !digits(body.substr(slash + 1), den) || den == 0)
      return std::nullopt;
    return Rational(negative ? -num : num, den);
  }

  const auto dot = body.find('.');
  const std::string_view int_part = dot == std::string_view::npos ? body : body.substr(0, dot);
  const std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) return std::nullopt;

  i128 num = 0;
  i128 den = 1;
  for (char c : int_part) {
    if (c < '0' || c > '9') return std::nullopt;
    num = num * 10 + (c - '0');
    if (num > INT64_MAX) return std::nullopt;
  }
  for (char c : frac_part) {
    if (c < '0' || c > '9') return std::nullopt;
    num = num * 10 + (c - '0');
    den *= 10;
    if (num > INT64_MAX || den > INT64_MAX) return std::nullopt;
  }
  return from_i128(negative ? -num : num, den);
}

inline std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  // Try to scale the denominator up to a power of ten.
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  const int k = twos > fives ? twos : fives;
  i128 scaled = num_;
  for (int i = 0; i < k; ++i) scaled *= 10;
  scaled /= den_;
  const bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits;
  while (scaled > 0) { digits.push_back(static_cast<char>('0' + int(scaled % 10))); scaled /= 10; }
  while (static_cast<int>(digits.size()) <= k) digits.push_back('0');
  std::string out;
  if (neg) out.push_back('-');
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (static_cast<int>(digits.rend() - it) == k) out.push_back('.');
    out.push_back(*it);
  }
  // Trim trailing zeros after the decimal point.
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

}  // namespace skytrav
