#pragma once

// Damping kernels of the exact screen distribution, stable for all theta >= 0.
//
//   relaxation_ratio(theta) = (1 - e^{-2 theta}) / theta               -> 2
//   gamma_kernel(theta)     = f(theta) / (16 theta^3),
//                             f = 4 theta + 4 e^{-2 theta} - e^{-4 theta} - 3 -> 1/3
//
// f cancels to O(theta^3) from O(1) terms, so below kSeriesThreshold the
// Taylor series is summed instead. The threshold is where both branches agree
// to < 1e-10 relative; the continuity tests pin that.

#include <cmath>

namespace dslit::series {

inline constexpr double kSeriesThreshold = 1e-2;

enum class Branch { automatic, closed_form, taylor };

namespace detail {

// Sum terms a_n theta^n until they stop changing the total.
template <class Coefficient>
double power_series(double theta, Coefficient coefficient, int first, int max_terms = 60) {
    double sum = 0.0;
    double power = 1.0;
    for (int n = first; n < first + max_terms; ++n) {
        const double term = coefficient(n) * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        power *= theta;
    }
    return sum;
}

} // namespace detail

/// (1 - e^{-2 theta}) / theta.
inline double relaxation_ratio(double theta, Branch branch = Branch::automatic) {
    const bool taylor = branch == Branch::taylor ||
                        (branch == Branch::automatic && theta < kSeriesThreshold);
    if (!taylor) return -std::expm1(-2.0 * theta) / theta;
    // sum_{n>=0} (-2)^n 2 theta^n / (n+1)!
    return detail::power_series(
        theta,
        [](int n) {
            double c = 2.0;
            for (int j = 1; j <= n; ++j) c *= -2.0 / (j + 1);
            return c;
        },
        0);
}

/// f(theta) / (16 theta^3) with f = 4 theta + 4 e^{-2 theta} - e^{-4 theta} - 3.
inline double gamma_kernel(double theta, Branch branch = Branch::automatic) {
    const bool taylor = branch == Branch::taylor ||
                        (branch == Branch::automatic && theta < kSeriesThreshold);
    if (!taylor) {
        const double f = 4.0 * theta + 4.0 * std::expm1(-2.0 * theta) - std::expm1(-4.0 * theta);
        return f / (16.0 * theta * theta * theta);
    }
    // f = sum_{n>=3} (-1)^n (2^{n+2} - 4^n) theta^n / n!
    return detail::power_series(
        theta,
        [](int m) {
            const int n = m + 3;
            double factorial = 1.0;
            for (int j = 2; j <= n; ++j) factorial *= j;
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            return sign * (std::ldexp(1.0, n + 2) - std::ldexp(1.0, 2 * n)) / (16.0 * factorial);
        },
        0);
}

} // namespace dslit::series
