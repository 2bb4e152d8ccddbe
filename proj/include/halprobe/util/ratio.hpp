#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace halprobe::util {

// Exact rational value used for metric aggregation and tie comparisons.
// Always kept normalized: gcd(|num|, den) == 1, den > 0.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Ratio() = default;
  Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  static Ratio zero() { return Ratio(); }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  Ratio operator+(const Ratio& other) const {
    __int128 n = static_cast<__int128>(num) * other.den + static_cast<__int128>(other.num) * den;
    __int128 d = static_cast<__int128>(den) * other.den;
    return from_wide(n, d);
  }

  Ratio operator/(std::int64_t divisor) const {
    return from_wide(num, static_cast<__int128>(den) * divisor);
  }

  Ratio operator*(const Ratio& other) const {
    return from_wide(static_cast<__int128>(num) * other.num,
                     static_cast<__int128>(den) * other.den);
  }

  Ratio operator/(const Ratio& other) const {
    return from_wide(static_cast<__int128>(num) * other.den,
                     static_cast<__int128>(den) * other.num);
  }

  bool operator==(const Ratio& other) const { return num == other.num && den == other.den; }
  bool operator!=(const Ratio& other) const { return !(*this == other); }

  bool operator<(const Ratio& other) const {
    return static_cast<__int128>(num) * other.den < static_cast<__int128>(other.num) * den;
  }

 private:
  void normalize() {
    if (den == 0) throw std::domain_error("Ratio: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Ratio from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Ratio: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) {
      throw std::overflow_error("Ratio: value out of 64-bit range");
    }
    Ratio r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }
};

}  // namespace halprobe::util
