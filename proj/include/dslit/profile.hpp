#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dslit/errors.hpp"

namespace dslit {

enum class Source { exact, weak, oracle };

inline std::string_view to_string(Source s) {
    switch (s) {
    case Source::exact: return "exact";
    case Source::weak: return "weak";
    case Source::oracle: return "oracle";
    }
    return "unknown";
}

/// Which set of constants the closed forms use. `published` is the set in
/// common circulation; `calibrated` is the one the characteristics oracle
/// reproduces (see docs/derivation.md).
enum class Convention { published, calibrated };

inline std::string_view to_string(Convention c) {
    return c == Convention::published ? "published" : "calibrated";
}

inline Convention convention_from_string(std::string_view s) {
    if (s == "published") return Convention::published;
    if (s == "calibrated") return Convention::calibrated;
    throw ConfigError("unknown variant '" + std::string(s) + "' (expected published|calibrated)");
}

struct ProfileMeta {
    Source source = Source::exact;
    Convention convention = Convention::calibrated;
    std::map<std::string, double> parameters; // echo of the groups used
    std::vector<std::string> warnings;
    std::string timestamp; // filled in by the CLI, empty inside the library
};

/// Sampled screen intensity rho(x, x, t) in 1/m.
struct PatternProfile {
    std::vector<double> positions;
    std::vector<double> intensities;
    ProfileMeta meta;

    std::size_t size() const { return positions.size(); }
};

/// `points` samples on [-half_span, half_span]. Computed from integer
/// numerators so that x[n-1-i] == -x[i] bit for bit.
inline std::vector<double> symmetric_grid(double half_span, std::size_t points) {
    if (!(half_span > 0.0)) throw std::invalid_argument("grid half span must be positive");
    if (points < 2) throw std::invalid_argument("grid needs at least two points");
    std::vector<double> x(points);
    const double denom = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double num = 2.0 * static_cast<double>(i) - denom;
        x[i] = half_span * num / denom;
    }
    return x;
}

/// Uniform grid on [lo, hi] with `points` samples.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    if (!(hi > lo) || points < 2) throw std::invalid_argument("bad uniform grid");
    std::vector<double> x(points);
    const double denom = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double w = static_cast<double>(i) / denom;
        x[i] = lo * (1.0 - w) + hi * w;
    }
    return x;
}

inline void require_sorted_finite(std::span<const double> grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw std::invalid_argument("grid contains a non-finite value");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("grid must be strictly increasing");
    }
}

/// Trapezoid rule over the profile's own sample points.
inline double integrate(const PatternProfile& profile) {
    double total = 0.0;
    for (std::size_t i = 1; i < profile.size(); ++i) {
        total += 0.5 * (profile.intensities[i] + profile.intensities[i - 1]) *
                 (profile.positions[i] - profile.positions[i - 1]);
    }
    return total;
}

} // namespace dslit
