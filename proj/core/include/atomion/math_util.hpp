#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace atomion {

// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, m_; // m_ = second derivatives
};

// Fritsch-Carlson monotone cubic interpolant; never overshoots the data.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, d_; // d_ = endpoint slopes
};

// Quintic smoothstep: 0 for t<=0, 1 for t>=1, C^2 in between.
double smoothstep(double t);

// Nodes and weights for int_0^inf x^(1/2) e^(-x) f(x) dx (generalized
// Gauss-Laguerre, alpha = 1/2), via the Golub-Welsch eigenproblem.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_laguerre_half(int n);

// Least-squares line through (x, y); returns {slope, intercept}.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Bisection root of f on [a, b]; f(a), f(b) must bracket.
template <typename F>
double bisect(F&& f, double a, double b, double tol = 1e-13, int maxit = 200)
{
    double fa = f(a);
    for (int i = 0; i < maxit && b - a > tol * (1.0 + std::abs(a)); ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa <= 0) == (fm <= 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace atomion
