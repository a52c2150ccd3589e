#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polyswitch {

/// Raised when an exact operation would leave the 64-bit range.
class RationalOverflow : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// Exact rational number in lowest terms with a positive denominator.
///
/// Numerator and denominator are 64-bit; every operation is computed in
/// 128-bit intermediates and reduced, and a result that does not fit throws
/// RationalOverflow instead of rounding.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "a" for integers, "a/b" otherwise.
  std::string str() const;

  /// Parses "7", "-3/4", "0.6", "1.25e-2". Decimals are read exactly.
  static Rational parse(std::string_view text);

private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& r);

/// Rational extended with +infinity; used for costs of plays that may never
/// reach their goal.
class ExtRational {
public:
  ExtRational() = default;
  ExtRational(Rational value) : value_(value) {}  // NOLINT(implicit)
  ExtRational(std::int64_t value) : value_(value) {}  // NOLINT(implicit)

  static ExtRational infinity() {
    ExtRational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  /// Throws std::logic_error when infinite.
  const Rational& value() const;

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return a.value_ + b.value_;
  }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  /// "inf" or the rational string.
  std::string str() const { return infinite_ ? "inf" : value_.str(); }
  static ExtRational parse(std::string_view text);

private:
  Rational value_;
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtRational& r);

}  // namespace polyswitch

template <>
struct std::hash<polyswitch::Rational> {
  std::size_t operator()(const polyswitch::Rational& r) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(r.num());
    return h ^ (std::hash<std::int64_t>{}(r.den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};
