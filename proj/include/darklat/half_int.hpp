#ifndef DARKLAT_HALF_INT_HPP
#define DARKLAT_HALF_INT_HPP

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace darklat {

/// Exact half-integer angular momentum quantum number, stored as twice its
/// value (F = 9/2 is stored as 9). All F and m bookkeeping in the library
/// goes through this type so that parity checks (F - m integer) stay exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr explicit HalfInt(int whole) : twice_(2 * whole) {}

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr bool is_half_odd() const { return twice_ % 2 != 0; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }

  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

  /// Parses "9/2", "-9/2", "3", "+1/2". Anything else throws.
  static HalfInt parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty half-integer literal");
    std::size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        std::size_t used = 0;
        int whole = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return HalfInt(whole);
      }
      std::size_t used = 0;
      int num = std::stoi(s.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(s);
      std::string denom = s.substr(slash + 1);
      if (denom != "2") throw std::invalid_argument(s);
      return from_twice(num);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed half-integer literal: '" + s + "'");
    }
  }

 private:
  int twice_ = 0;
};

/// True when m is an allowed projection of f: |m| <= f and f - m integer.
inline bool projection_valid(HalfInt f, HalfInt m) {
  if (std::abs(m.twice()) > f.twice()) return false;
  return (f.twice() - m.twice()) % 2 == 0;
}

/// Number of projections m = -f..f.
inline int multiplicity(HalfInt f) { return f.twice() + 1; }

/// Index of m within the ascending ladder -f, -f+1, ..., f.
inline int projection_index(HalfInt f, HalfInt m) {
  if (!projection_valid(f, m)) throw std::invalid_argument("invalid projection m for F=" + f.str());
  return (m.twice() + f.twice()) / 2;
}

inline HalfInt projection_at(HalfInt f, int index) {
  return HalfInt::from_twice(-f.twice() + 2 * index);
}

}  // namespace darklat

#endif
