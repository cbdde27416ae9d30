#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace arthur {

// Exact arithmetic in (1/2)Z. The stored value is twice the represented
// number, so all shifts by 1/2 stay in integers and no floating point is
// ever involved.
struct HalfInt {
  long long tw = 0;  // twice the value

  constexpr HalfInt() = default;
  constexpr explicit HalfInt(long long twice) : tw(twice) {}

  static constexpr HalfInt whole(long long n) { return HalfInt(2 * n); }
  static constexpr HalfInt half(long long n) { return HalfInt(n); }  // n/2

  constexpr bool integral() const { return tw % 2 == 0; }
  constexpr long long as_int() const {
    if (!integral()) throw std::domain_error("HalfInt: not an integer");
    return tw / 2;
  }
  // floor of the represented value
  constexpr long long floor() const {
    long long q = tw / 2;
    if (tw < 0 && tw % 2 != 0) --q;
    return q;
  }

  constexpr HalfInt operator-() const { return HalfInt(-tw); }
  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(tw + o.tw); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(tw - o.tw); }
  constexpr HalfInt operator+(long long n) const { return HalfInt(tw + 2 * n); }
  constexpr HalfInt operator-(long long n) const { return HalfInt(tw - 2 * n); }
  constexpr HalfInt& operator+=(HalfInt o) { tw += o.tw; return *this; }
  constexpr HalfInt& operator-=(HalfInt o) { tw -= o.tw; return *this; }
  constexpr HalfInt& operator++() { tw += 2; return *this; }
  constexpr HalfInt& operator--() { tw -= 2; return *this; }

  constexpr auto operator<=>(const HalfInt&) const = default;
  constexpr bool operator==(const HalfInt&) const = default;

  std::string str() const {
    if (integral()) return std::to_string(tw / 2);
    return std::to_string(tw) + "/2";
  }
};

constexpr HalfInt operator+(long long n, HalfInt h) { return h + n; }
constexpr HalfInt operator*(long long n, HalfInt h) { return HalfInt(n * h.tw); }

// value difference as an exact integer; throws if the gap is fractional
inline long long int_gap(HalfInt a, HalfInt b) { return (a - b).as_int(); }

enum class Sign : int { minus = -1, plus = +1 };

constexpr Sign operator-(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
constexpr Sign operator*(Sign a, Sign b) {
  return a == b ? Sign::plus : Sign::minus;
}
constexpr int sign_int(Sign s) { return static_cast<int>(s); }
constexpr char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }
// s^n
constexpr Sign sign_pow(Sign s, long long n) {
  return (s == Sign::plus || n % 2 == 0) ? Sign::plus : Sign::minus;
}
constexpr Sign parity_sign(long long n) {  // (-1)^n
  return n % 2 == 0 ? Sign::plus : Sign::minus;
}
constexpr HalfInt operator*(Sign s, HalfInt h) { return HalfInt(sign_int(s) * h.tw); }

}  // namespace arthur
