#pragma once

// Small quadrature helpers: composite 16-point Gauss-Legendre panels and a
// classic adaptive Simpson driver with an absolute tolerance budget.

#include <array>
#include <cmath>
#include <cstddef>

namespace wickshift {
namespace quad {

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; mirror for the rest).
inline constexpr std::array<double, 8> gl16_x = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> gl16_w = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
double gl16_panels(F&& f, double lo, double hi, int panels) {
    if (panels < 1) panels = 1;
    double acc = 0.0;
    const double half = (hi - lo) / (2.0 * panels);
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (2 * p + 1) * half;
        for (int q = 0; q < 8; ++q) {
            acc += gl16_w[q] * (f(mid - half * gl16_x[q]) + f(mid + half * gl16_x[q]));
        }
    }
    return acc * half;
}

namespace detail {
template <typename F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Absolute-tolerance adaptive Simpson on [a, b].
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 24) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace quad
}  // namespace wickshift
