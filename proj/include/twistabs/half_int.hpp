#pragma once

#include <cmath>
#include <compare>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "twistabs/error.hpp"

namespace twistabs {

/// Angular-momentum quantum number restricted to multiples of 1/2, stored as
/// twice its value so that every triangle and parity test is integer exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int integer) : twice_(2 * integer) {}  // NOLINT: 3 means 3

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// Only meaningful when is_integer().
  constexpr int as_int() const { return twice_ / 2; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice_ -= o.twice_;
    return *this;
  }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

  std::string str() const {
    return is_integer() ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }
  friend std::ostream& operator<<(std::ostream& os, HalfInt h) { return os << h.str(); }

 private:
  int twice_ = 0;
};

inline constexpr HalfInt kHalf = HalfInt::from_twice(1);

constexpr HalfInt abs(HalfInt h) { return h.twice() < 0 ? -h : h; }

/// Parses "3", "-1", "5/2", "-3/2", "0.5", "2.5".
inline HalfInt parse_half_int(const std::string& text) {
  auto fail = [&] { throw DomainError("not a half-integer: '" + text + "'"); };
  if (text.empty()) fail();
  const auto slash = text.find('/');
  std::size_t used = 0;
  try {
    if (slash != std::string::npos) {
      if (text.substr(slash + 1) != "2") fail();
      const int num = std::stoi(text.substr(0, slash), &used);
      if (used != slash) fail();
      return HalfInt::from_twice(num);
    }
    const double v = std::stod(text, &used);
    if (used != text.size()) fail();
    const double twice = 2.0 * v;
    const long rounded = std::lround(twice);
    if (twice != static_cast<double>(rounded)) fail();
    return HalfInt::from_twice(static_cast<int>(rounded));
  } catch (const std::logic_error&) {
    fail();
  }
  return {};
}

/// True when j - m is an integer.
constexpr bool same_parity(HalfInt j, HalfInt m) { return (j.twice() - m.twice()) % 2 == 0; }

/// |j1 - j2| <= j3 <= j1 + j2 and j1 + j2 + j3 integer.
constexpr bool triangle(HalfInt j1, HalfInt j2, HalfInt j3) {
  if (j1.twice() < 0 || j2.twice() < 0 || j3.twice() < 0) return false;
  if ((j1.twice() + j2.twice() + j3.twice()) % 2 != 0) return false;
  return std::abs(j1.twice() - j2.twice()) <= j3.twice() && j3.twice() <= j1.twice() + j2.twice();
}

/// Magnetic projections -j, -j+1, ..., j.
inline std::vector<HalfInt> projections(HalfInt j) {
  std::vector<HalfInt> out;
  for (int t = -j.twice(); t <= j.twice(); t += 2) out.push_back(HalfInt::from_twice(t));
  return out;
}

}  // namespace twistabs
