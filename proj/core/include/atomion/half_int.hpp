#pragma once

#include <cassert>
#include <compare>
#include <cstdlib>
#include <string>

namespace atomion {

// Exact half-integer angular momentum value, stored as 2j.
class HalfInt {
  public:
    constexpr HalfInt() : twice_(0) {}
    constexpr HalfInt(int whole) : twice_(2 * whole) {}
    static constexpr HalfInt from_twice(int twice) {
        HalfInt h;
        h.twice_ = twice;
        return h;
    }

    constexpr int twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double value() const { return 0.5 * twice_; }
    constexpr int as_int() const {
        assert(is_integer());
        return twice_ / 2;
    }

    constexpr HalfInt operator-() const { return from_twice(-twice_); }
    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

  private:
    int twice_;
};

inline constexpr HalfInt half(int twice) { return HalfInt::from_twice(twice); }

inline constexpr HalfInt abs(HalfInt a) { return HalfInt::from_twice(std::abs(a.twice())); }

// |a-b| <= c <= a+b with integer perimeter.
inline constexpr bool triangle(HalfInt a, HalfInt b, HalfInt c)
{
    if ((a.twice() + b.twice() + c.twice()) % 2 != 0) return false;
    return abs(a - b) <= c && c <= a + b;
}

// (-1)^x for an integer-valued HalfInt sum; callers guarantee integerness.
inline int phase(HalfInt x)
{
    assert(x.is_integer());
    return (x.as_int() % 2 == 0) ? 1 : -1;
}

} // namespace atomion
