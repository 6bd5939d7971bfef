#pragma once

// Measurement-style fringe visibility: find a bright fringe and its
// neighbouring dark fringe in a sampled profile and form
// (I_max - I_min) / (I_max + I_min).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <optional>
#include <vector>

#include "dslit/profile.hpp"

namespace dslit::closedform {

enum class FringeStatus { ok, no_fringe };

inline std::string_view to_string(FringeStatus s) { return s == FringeStatus::ok ? "ok" : "no-fringe"; }

struct FringeVisibility {
    FringeStatus status = FringeStatus::no_fringe;
    double visibility = 0.0;
    double x_max = 0.0; // refined bright-fringe position, m
    double x_min = 0.0; // refined neighbouring dark-fringe position, m
    double i_max = 0.0;
    double i_min = 0.0;

    double fringe_center() const { return 0.5 * (x_max + x_min); }
    bool found() const { return status == FringeStatus::ok; }
};

namespace detail {

struct Extremum {
    double x;
    double value;
};

// Vertex of the parabola through three (possibly unevenly spaced) samples.
inline Extremum refine(const std::vector<double>& x, const std::vector<double>& y, std::size_t i) {
    if (i == 0 || i + 1 >= x.size()) return {x[i], y[i]};
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (a == 0.0) return {x1, y1};
    const double b = d01 - a * (x0 + x1);
    const double xv = -b / (2.0 * a);
    if (xv < x0 || xv > x2) return {x1, y1};
    const double yv = y1 + (xv - x1) * (d01 + a * (xv - x0));
    return {xv, yv};
}

} // namespace detail

/// Visibility of bright fringe `fringe_index` (0 = the maximum nearest x = 0,
/// positive indices count outwards to the right, negative to the left),
/// paired with the dark fringe on its outward side.
///
/// The profile should carry at least 8 samples per fringe; extremum values
/// are refined by a three-point parabola.
inline FringeVisibility visibility_numeric(const PatternProfile& profile, int fringe_index) {
    const auto& x = profile.positions;
    const auto& y = profile.intensities;
    FringeVisibility out;
    if (x.size() < 3) return out;

    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] >= y[i - 1] && y[i] > y[i + 1]) maxima.push_back(i);
        else if (y[i] <= y[i - 1] && y[i] < y[i + 1]) minima.push_back(i);
    }
    if (maxima.empty() || minima.empty()) return out;

    const auto central = std::min_element(maxima.begin(), maxima.end(), [&](auto a, auto b) {
        return std::abs(x[a]) < std::abs(x[b]);
    });
    const auto pos = static_cast<long>(central - maxima.begin()) + fringe_index;
    if (pos < 0 || pos >= static_cast<long>(maxima.size())) return out;
    const std::size_t imax = maxima[static_cast<std::size_t>(pos)];

    std::optional<std::size_t> imin;
    if (fringe_index >= 0) {
        const auto it = std::upper_bound(minima.begin(), minima.end(), imax);
        if (it != minima.end()) imin = *it;
    } else {
        const auto it = std::lower_bound(minima.begin(), minima.end(), imax);
        if (it != minima.begin()) imin = *std::prev(it);
    }
    if (!imin) return out;

    const auto hi = detail::refine(x, y, imax);
    const auto lo = detail::refine(x, y, *imin);
    const double sum = hi.value + lo.value;
    if (!(sum > 0.0)) return out;
    const double v = (hi.value - lo.value) / sum;
    if (!(v > 1e-12)) return out;

    out.status = FringeStatus::ok;
    out.visibility = v;
    out.x_max = hi.x;
    out.x_min = lo.x;
    out.i_max = hi.value;
    out.i_min = lo.value;
    return out;
}

} // namespace dslit::closedform
