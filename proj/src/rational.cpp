#include "polyswitch/rational.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace polyswitch {

namespace {

using wide = __int128;

wide wide_gcd(wide a, wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(wide v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(wide num, wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits(num) || !fits(den)) throw RationalOverflow("rational arithmetic overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::operator-() const {
  return from_wide(-static_cast<wide>(num_), den_);
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (den_ == rhs.den_) {
    *this = from_wide(static_cast<wide>(num_) + rhs.num_, den_);
  } else {
    *this = from_wide(static_cast<wide>(num_) * rhs.den_ + static_cast<wide>(rhs.num_) * den_,
                      static_cast<wide>(den_) * rhs.den_);
  }
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  return *this += -rhs;
}

Rational& Rational::operator*=(const Rational& rhs) {
  // Cross-reduce first so that products of reduced fractions stay small.
  wide g1 = wide_gcd(num_, rhs.den_);
  wide g2 = wide_gcd(rhs.num_, den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  *this = from_wide((num_ / g1) * (rhs.num_ / g2), (den_ / g2) * (rhs.den_ / g1));
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw std::domain_error("rational division by zero");
  *this = from_wide(static_cast<wide>(num_) * rhs.den_, static_cast<wide>(den_) * rhs.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  wide lhs = static_cast<wide>(a.num_) * b.den_;
  wide rhs = static_cast<wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_literal(text);

  auto parse_int = [&](std::string_view part) -> wide {
    if (part.empty()) bad_literal(text);
    std::int64_t v = 0;
    const char* first = part.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, part.data() + part.size(), v);
    if (ec == std::errc::result_out_of_range) throw RationalOverflow("rational literal out of range");
    if (ec != std::errc{} || ptr != part.data() + part.size()) bad_literal(text);
    return v;
  };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    return from_wide(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  }

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  wide exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = parse_int(s.substr(e + 1));
    s = s.substr(0, e);
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad_literal(text);

  wide num = 0;
  wide den = 1;
  const wide limit = static_cast<wide>(1) << 100;
  for (char c : int_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) bad_literal(text);
    num = num * 10 + (c - '0');
    if (num > limit) throw RationalOverflow("rational literal out of range");
  }
  for (char c : frac_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) bad_literal(text);
    num = num * 10 + (c - '0');
    den *= 10;
    if (num > limit || den > limit) throw RationalOverflow("rational literal out of range");
  }
  for (; exponent > 0; --exponent) {
    num *= 10;
    if (num > limit) throw RationalOverflow("rational literal out of range");
  }
  for (; exponent < 0; ++exponent) {
    den *= 10;
    if (den > limit) throw RationalOverflow("rational literal out of range");
  }
  return from_wide(negative ? -num : num, den);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

Rational abs(const Rational& r) {
  return r.sign() < 0 ? -r : r;
}

const Rational& ExtRational::value() const {
  if (infinite_) throw std::logic_error("value() of an infinite cost");
  return value_;
}

ExtRational ExtRational::parse(std::string_view text) {
  if (text == "inf" || text == "infinity") return infinity();
  return Rational::parse(text);
}

std::ostream& operator<<(std::ostream& os, const ExtRational& r) {
  return os << r.str();
}

}  // namespace polyswitch
