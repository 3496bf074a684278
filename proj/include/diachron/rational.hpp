#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace diachron {

// Non-negative exact fraction, always stored reduced. A zero denominator
// request yields 0/1 (the "0 when nothing to divide" convention used by
// association percentages and Dice scores).
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::uint64_t num, std::uint64_t den) {
    if (den == 0 || num == 0) return;
    std::uint64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  constexpr std::uint64_t num() const { return num_; }
  constexpr std::uint64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
  friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    auto lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
    auto rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  // Decimal rendering rounded half-up to `decimals` places, e.g. "26.81".
  std::string to_fixed(int decimals) const;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

// 100 * part / whole, exact; 0 when whole is 0.
inline Rational percent(std::uint64_t whole, std::uint64_t part) {
  return whole == 0 ? Rational{} : Rational(100 * part, whole);
}

}  // namespace diachron
