#pragma once

#include "errors.hpp"

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace approvalkit {

/// Exact rational score, always kept in lowest terms with a positive
/// denominator. Intermediate products are formed in 128 bits; a result that
/// does not fit back into 64 bits throws std::overflow_error instead of
/// wrapping.
class Score {
 public:
  using value_type = std::int64_t;

  constexpr Score() = default;
  constexpr Score(value_type integer) : num_(integer) {}  // NOLINT(google-explicit-constructor)
  Score(value_type numerator, value_type denominator) {
    if (denominator == 0) {
      throw std::invalid_argument("Score: zero denominator");
    }
    assign(numerator, denominator);
  }

  [[nodiscard]] constexpr value_type numerator() const { return num_; }
  [[nodiscard]] constexpr value_type denominator() const { return den_; }
  [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }

  Score& operator+=(const Score& rhs) {
    const auto g = std::gcd(den_, rhs.den_);
    const wide n = wide{num_} * (rhs.den_ / g) + wide{rhs.num_} * (den_ / g);
    const wide d = wide{den_} * (rhs.den_ / g);
    assign(n, d);
    return *this;
  }
  Score& operator-=(const Score& rhs) { return *this += -rhs; }
  Score& operator*=(const Score& rhs) {
    assign(wide{num_} * rhs.num_, wide{den_} * rhs.den_);
    return *this;
  }
  Score& operator/=(const Score& rhs) {
    if (rhs.num_ == 0) {
      throw std::domain_error("Score: division by zero");
    }
    assign(wide{num_} * rhs.den_, wide{den_} * rhs.num_);
    return *this;
  }

  friend Score operator+(Score lhs, const Score& rhs) { return lhs += rhs; }
  friend Score operator-(Score lhs, const Score& rhs) { return lhs -= rhs; }
  friend Score operator*(Score lhs, const Score& rhs) { return lhs *= rhs; }
  friend Score operator/(Score lhs, const Score& rhs) { return lhs /= rhs; }
  friend Score operator-(const Score& s) {
    Score r;
    r.assign(-wide{s.num_}, wide{s.den_});
    return r;
  }

  friend constexpr bool operator==(const Score&, const Score&) = default;
  friend std::strong_ordering operator<=>(const Score& a, const Score& b) {
    return wide{a.num_} * b.den_ <=> wide{b.num_} * a.den_;
  }

  /// "p/q", including "5/1" for integers and "0/1" for zero.
  [[nodiscard]] std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  [[nodiscard]] long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Score& s) { return os << s.to_string(); }

 private:
  using wide = __int128;

  static wide wide_gcd(wide a, wide b) {
    if (a < 0) a = -a;
    while (b != 0) {
      const wide t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(wide n, wide d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const wide g = wide_gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr wide lo = INT64_MIN;
    constexpr wide hi = INT64_MAX;
    if (n < lo || n > hi || d > hi) {
      throw std::overflow_error("Score: exact value exceeds 64-bit numerator/denominator");
    }
    num_ = static_cast<value_type>(n);
    den_ = static_cast<value_type>(d);
  }

  value_type num_ = 0;
  value_type den_ = 1;
};

/// Parses "p", "p/q" or "-p/q".
inline Score parse_score(const std::string& text) {
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& part) -> std::int64_t {
    if (part.empty()) {
      throw InputError("malformed rational '" + text + "'");
    }
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      throw InputError("malformed rational '" + text + "'");
    }
    if (used != part.size()) {
      throw InputError("malformed rational '" + text + "'");
    }
    return v;
  };
  if (slash == std::string::npos) {
    return Score(parse_int(text));
  }
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) {
    throw InputError("zero denominator in '" + text + "'");
  }
  return Score(parse_int(text.substr(0, slash)), den);
}

}  // namespace approvalkit
