#pragma once

// Test-only numerics: independent quadrature and comparison helpers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

namespace dslit::test {

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 50) {
    struct Step {
        static double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }
        static double run(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                          double fb, double whole, double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = simpson(fa, flm, fm, m - a);
            const double right = simpson(fm, frm, fb, b - m);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            return run(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   run(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return Step::run(f, a, b, fa, fm, fb, Step::simpson(fa, fm, fb, b - a), tol, depth);
}

/// max |a - b| / max |b|: deviation relative to the reference peak.
inline double peak_relative_deviation(std::span<const double> a, std::span<const double> b) {
    double peak = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        peak = std::max(peak, std::abs(b[i]));
        dev = std::max(dev, std::abs(a[i] - b[i]));
    }
    return dev / peak;
}

inline double relative_difference(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace dslit::test
