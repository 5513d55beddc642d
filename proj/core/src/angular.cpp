#include "atomion/angular.hpp"

#include <algorithm>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace atomion {
namespace {

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;
using BigRat = mp::cpp_rational;
using BigFloat = mp::cpp_bin_float_50;

const BigInt& factorial(int n)
{
    static const std::vector<BigInt> table = [] {
        std::vector<BigInt> t(400);
        t[0] = 1;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * BigInt(i);
        return t;
    }();
    return table.at(static_cast<std::size_t>(n));
}

// Integer value of a HalfInt combination known to be whole; -1 flags a
// half-odd result (invalid quantum numbers for the formula at hand).
bool whole(HalfInt x, int& out)
{
    if (x.twice() % 2 != 0) return false;
    out = x.twice() / 2;
    return true;
}

BigRat triangle_delta2(HalfInt a, HalfInt b, HalfInt c)
{
    int p, q, r, s;
    if (!whole(a + b - c, p) || !whole(a - b + c, q) || !whole(-a + b + c, r) || !whole(a + b + c, s))
        return BigRat(0);
    if (p < 0 || q < 0 || r < 0) return BigRat(0);
    return BigRat(factorial(p) * factorial(q) * factorial(r), factorial(s + 1));
}

// sign * sqrt(radicand) * factor, evaluated in 50-digit floats. The radicand
// is a positive exact rational; the factor carries its own sign.
double signed_sqrt_times(const BigRat& radicand, const BigRat& factor, int sign)
{
    if (radicand == 0 || factor == 0) return 0.0;
    const BigFloat v = sqrt(BigFloat(radicand)) * BigFloat(factor);
    return static_cast<double>(v) * sign;
}

double w3j_impl(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3)
{
    if ((m1 + m2 + m3).twice() != 0) return 0.0;
    if (!triangle(j1, j2, j3)) return 0.0;
    if (abs(m1) > j1 || abs(m2) > j2 || abs(m3) > j3) return 0.0;

    int a1, a2, a3, b1, b2, b3, c1, c2, c3;
    if (!whole(j1 + m1, a1) || !whole(j1 - m1, a2) || !whole(j2 + m2, b1) || !whole(j2 - m2, b2) ||
        !whole(j3 + m3, c1) || !whole(j3 - m3, c2) || !whole(j1 + j2 - j3, a3) ||
        !whole(j3 - j2 + m1, b3) || !whole(j3 - j1 - m2, c3))
        return 0.0;

    const int kmin = std::max({0, -b3, -c3});
    const int kmax = std::min({a3, a2, b1});
    if (kmin > kmax) return 0.0;

    BigRat sum(0);
    for (int k = kmin; k <= kmax; ++k) {
        BigInt den = factorial(k) * factorial(a3 - k) * factorial(a2 - k) * factorial(b1 - k) *
                     factorial(b3 + k) * factorial(c3 + k);
        BigRat term(1, den);
        if (k % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return 0.0;

    BigRat radicand = triangle_delta2(j1, j2, j3);
    radicand *= BigRat(factorial(a1) * factorial(a2) * factorial(b1) * factorial(b2) *
                       factorial(c1) * factorial(c2));

    int ph;
    if (!whole(j1 - j2 - m3, ph)) return 0.0;
    const int sign = (ph % 2 == 0) ? 1 : -1;
    return signed_sqrt_times(radicand, sum, sign);
}

BigFloat w6j_impl(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f)
{
    if (!triangle(a, b, c) || !triangle(a, e, f) || !triangle(d, b, f) || !triangle(d, e, c))
        return BigFloat(0);

    int t1, t2, t3, t4, p1, p2, p3;
    if (!whole(a + b + c, t1) || !whole(a + e + f, t2) || !whole(d + b + f, t3) ||
        !whole(d + e + c, t4) || !whole(a + b + d + e, p1) || !whole(b + c + e + f, p2) ||
        !whole(a + c + d + f, p3))
        return BigFloat(0);

    const int kmin = std::max({t1, t2, t3, t4});
    const int kmax = std::min({p1, p2, p3});
    if (kmin > kmax) return BigFloat(0);

    BigRat sum(0);
    for (int k = kmin; k <= kmax; ++k) {
        BigInt den = factorial(k - t1) * factorial(k - t2) * factorial(k - t3) * factorial(k - t4) *
                     factorial(p1 - k) * factorial(p2 - k) * factorial(p3 - k);
        BigRat term(factorial(k + 1), den);
        if (k % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return BigFloat(0);

    BigRat radicand = triangle_delta2(a, b, c) * triangle_delta2(a, e, f) *
                      triangle_delta2(d, b, f) * triangle_delta2(d, e, c);
    return sqrt(BigFloat(radicand)) * BigFloat(sum);
}

} // namespace

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3)
{
    return w3j_impl(j1, j2, j3, m1, m2, m3);
}

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M)
{
    if ((m1 + m2 - M).twice() != 0) return 0.0;
    if (!triangle(j1, j2, J)) return 0.0;
    const double t = w3j_impl(j1, j2, J, m1, m2, -M);
    if (t == 0.0) return 0.0;
    int ph;
    if (!whole(j1 - j2 + M, ph)) return 0.0;
    const int sign = (ph % 2 == 0) ? 1 : -1;
    return sign * std::sqrt(static_cast<double>(J.twice() + 1)) * t;
}

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6)
{
    return static_cast<double>(w6j_impl(j1, j2, j3, j4, j5, j6));
}

double wigner9j(HalfInt j1, HalfInt j2, HalfInt j3,
                HalfInt j4, HalfInt j5, HalfInt j6,
                HalfInt j7, HalfInt j8, HalfInt j9)
{
    // Contraction over the recoupling momentum x of three 6j symbols.
    const HalfInt lo = std::max({abs(j1 - j9), abs(j4 - j8), abs(j2 - j6)});
    const HalfInt hi = std::min({j1 + j9, j4 + j8, j2 + j6});
    if (lo > hi) return 0.0;

    BigFloat sum(0);
    for (int tx = lo.twice(); tx <= hi.twice(); tx += 2) {
        const HalfInt x = half(tx);
        BigFloat term = w6j_impl(j1, j4, j7, j8, j9, x) *
                        w6j_impl(j2, j5, j8, j4, x, j6) *
                        w6j_impl(j3, j6, j9, x, j1, j2);
        term *= BigFloat(tx + 1);
        if (tx % 2 != 0) term = -term;
        sum += term;
    }
    return static_cast<double>(sum);
}

} // namespace atomion
