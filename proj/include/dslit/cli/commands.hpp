#pragma once

// The four batch commands behind the `dslit` executable. Every command is a
// pure function of its RunConfig; files are written only after all numbers
// are computed, in a fixed order, so identical configs give identical bytes
// (apart from the JSON `timestamp` field).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dslit/cli/config.hpp"
#include "dslit/closedform.hpp"
#include "dslit/errors.hpp"
#include "dslit/free_evolution.hpp"
#include "dslit/oracle.hpp"
#include "dslit/params.hpp"
#include "dslit/profile.hpp"
#include "dslit/version.hpp"
#include "dslit/visibility.hpp"

namespace dslit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_io = 3,
    exit_convergence = 4,
    exit_numerical = 5,
};

/// Seconds since the epoch from SOURCE_DATE_EPOCH if set, else the clock,
/// formatted as ISO 8601 UTC.
inline std::string timestamp_now() {
    std::time_t t = std::time(nullptr);
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        long long v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && ptr == s.data() + s.size()) t = static_cast<std::time_t>(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------- setup

/// Scale-free problem for any input mode. Physical mode runs full validation.
inline ScaledSetup setup_of(const RunConfig& cfg) {
    switch (cfg.mode) {
    case InputMode::ratio: return scaled_from_ratio(geometry_of(cfg.physical), cfg.t_ratio);
    case InputMode::physical:
    case InputMode::natural: return scaled(cfg.physical);
    }
    return {};
}

inline std::vector<std::string> warnings_of(const RunConfig& cfg) {
    if (cfg.mode == InputMode::ratio) return dslit::detail::validate_geometry(geometry_of(cfg.physical));
    return validate(cfg.physical);
}

/// Half width of the screen window: the configured span, or four published
/// exact-pattern widths (the wider of the two conventions) past the slit.
inline double grid_span_of(const RunConfig& cfg, const ScaledSetup& setup) {
    if (cfg.grid_span > 0.0) return cfg.grid_span;
    const auto e = closedform::exact_pattern_params(setup.groups, Convention::published);
    return (4.0 * std::sqrt(e.omega_sq) + 0.5 * setup.groups.dtilde) * setup.length_unit;
}

inline PatternProfile compute_pattern(const RunConfig& cfg, const ScaledSetup& setup, std::span<const double> grid) {
    auto prof = cfg.model == Model::weak ? closedform::pattern_weak(setup, grid, cfg.variant)
                                         : closedform::pattern_exact(setup, grid, cfg.variant);
    auto warnings = warnings_of(cfg);
    prof.meta.warnings.insert(prof.meta.warnings.begin(), warnings.begin(), warnings.end());
    return prof;
}

/// Fringe period of the pattern the config describes, in metres; +inf when
/// there are no fringes (d = 0).
inline double period_of(const RunConfig& cfg, const ScaledSetup& setup) {
    const double k = cfg.model == Model::weak
                         ? closedform::weak_shape(setup.groups, cfg.variant).wavenumber
                         : closedform::exact_pattern_params(setup.groups, cfg.variant).cos_coeff;
    if (!(k > 0.0)) return std::numeric_limits<double>::infinity();
    return 2.0 * std::numbers::pi / k * setup.length_unit;
}

// ---------------------------------------------------------------- output

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

inline void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

inline void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline std::string profile_csv(const PatternProfile& prof) {
    std::string s = "x_m,intensity_per_m\n";
    for (std::size_t i = 0; i < prof.size(); ++i)
        s += format_double(prof.positions[i]) + "," + format_double(prof.intensities[i]) + "\n";
    return s;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json scales_json(const RunConfig& cfg) {
    const auto& p = cfg.physical;
    json j;
    const double lambda_l = p.de_broglie_wavelength * p.path_length;
    j["envelope_width_m"] = lambda_l / (std::numbers::pi * p.packet_width);
    j["fringe_spacing_m"] = number_or_null(p.slit_separation > 0 ? lambda_l / p.slit_separation
                                                                 : std::numeric_limits<double>::infinity());
    if (cfg.mode != InputMode::ratio) {
        const auto s = derive_scales(p);
        j["flight_time_s"] = s.flight_time;
        j["diffusion"] = s.diffusion;
        j["decoherence_time_s"] = number_or_null(s.decoherence_time);
    }
    return j;
}

inline json groups_json(const ScaledSetup& setup) {
    const auto& g = setup.groups;
    return {{"theta", g.theta},   {"beta", g.beta},           {"kappa", g.kappa},
            {"dtilde", g.dtilde}, {"t_ratio", g.t_ratio()}, {"length_unit_m", setup.length_unit}};
}

inline json sidecar(const std::string& command, const RunConfig& cfg, const ScaledSetup& setup,
                    const ProfileMeta& meta) {
    json j;
    j["tool"] = "dslit";
    j["version"] = std::string(version);
    j["command"] = command;
    j["timestamp"] = meta.timestamp;
    j["config"] = to_json(cfg);
    j["derived_scales"] = scales_json(cfg);
    j["dimensionless_groups"] = groups_json(setup);
    j["source"] = std::string(to_string(meta.source));
    j["convention"] = std::string(to_string(meta.convention));
    j["warnings"] = meta.warnings;
    return j;
}

// ---------------------------------------------------------------- pattern

/// Screen pattern on the configured grid; writes pattern.csv and pattern.json.
inline PatternProfile run_pattern(const RunConfig& cfg, const fs::path& out_dir,
                                  const std::string& stem = "pattern") {
    const auto setup = setup_of(cfg);
    const auto grid = symmetric_grid(grid_span_of(cfg, setup), cfg.grid_points);
    auto prof = compute_pattern(cfg, setup, grid);
    prof.meta.timestamp = timestamp_now();
    ensure_directory(out_dir);
    write_text(out_dir / (stem + ".csv"), profile_csv(prof));
    write_text(out_dir / (stem + ".json"), sidecar("pattern", cfg, setup, prof.meta).dump(2) + "\n");
    return prof;
}

// ---------------------------------------------------------------- visibility

struct VisibilityRow {
    int fringe_index = 0;
    double position = 0.0; // nominal bright-fringe position n * period, m
    double formula = 0.0;
    std::optional<double> numeric; // empty when no fringe was found
    closedform::FringeStatus status = closedform::FringeStatus::no_fringe;

    std::optional<double> discrepancy() const {
        if (!numeric) return std::nullopt;
        return std::abs(*numeric - formula);
    }
};

inline constexpr int kSamplesPerPeriod = 64;

/// Both visibility paths for every configured fringe index. The numeric value
/// comes from a window of three periods centred on the fringe, sampled at
/// 64 points per period.
inline std::vector<VisibilityRow> compute_visibility(const RunConfig& cfg) {
    const auto setup = setup_of(cfg);
    warnings_of(cfg);
    const double period = period_of(cfg, setup);
    std::vector<VisibilityRow> rows;
    for (int n : cfg.fringe_indices) {
        VisibilityRow row;
        row.fringe_index = n;
        if (!std::isfinite(period)) {
            row.position = 0.0;
            row.formula = 0.0;
            rows.push_back(row);
            continue;
        }
        row.position = n * period;
        row.formula = closedform::visibility_formula(setup, row.position, cfg.variant);
        const auto grid = uniform_grid(row.position - 1.5 * period, row.position + 1.5 * period,
                                       3 * kSamplesPerPeriod + 1);
        const auto prof = compute_pattern(cfg, setup, grid);
        // The window holds maxima near x_n - P, x_n and x_n + P; the one closest
        // to the origin is index 0 of the window, so x_n sits one step outwards.
        const int local = n > 0 ? 1 : (n < 0 ? -1 : 0);
        const auto v = closedform::visibility_numeric(prof, local);
        row.status = v.status;
        if (v.found()) row.numeric = v.visibility;
        rows.push_back(row);
    }
    return rows;
}

inline std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

inline std::string visibility_csv(const std::vector<VisibilityRow>& rows) {
    std::string s = "fringe_index,x_n_m,formula,numeric,discrepancy,status\n";
    for (const auto& r : rows) {
        s += std::to_string(r.fringe_index) + "," + format_double(r.position) + "," + format_double(r.formula) +
             "," + optional_field(r.numeric) + "," + optional_field(r.discrepancy()) + "," +
             std::string(closedform::to_string(r.status)) + "\n";
    }
    return s;
}

inline std::vector<VisibilityRow> run_visibility(const RunConfig& cfg, const fs::path& out_dir) {
    const auto rows = compute_visibility(cfg);
    const auto setup = setup_of(cfg);
    ProfileMeta meta;
    meta.source = cfg.model == Model::weak ? Source::weak : Source::exact;
    meta.convention = cfg.variant;
    meta.warnings = warnings_of(cfg);
    meta.timestamp = timestamp_now();
    ensure_directory(out_dir);
    write_text(out_dir / "visibility.csv", visibility_csv(rows));
    write_text(out_dir / "visibility.json", sidecar("visibility", cfg, setup, meta).dump(2) + "\n");
    return rows;
}

// ---------------------------------------------------------------- oracle-compare

inline constexpr double kMatchTolerance = 1e-6;
inline constexpr double kFreeMatchTolerance = 1e-8;

struct VariantDeviation {
    Convention convention = Convention::calibrated;
    double max_abs = 0.0;
    double max_rel = 0.0; // relative to the oracle peak
    std::optional<double> free_rel; // against the analytic free result, theta = kappa = 0 only
};

struct OracleReport {
    PatternProfile oracle;
    std::vector<PatternProfile> variants; // published, calibrated
    std::vector<VariantDeviation> deviations;
    std::optional<double> oracle_free_rel;
    double doubling_change = 0.0;
    std::string winner; // "published", "calibrated", "both" or "none"
};

inline double max_abs_diff(const PatternProfile& a, const PatternProfile& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.intensities[i] - b.intensities[i]));
    return d;
}

inline double peak_of(const PatternProfile& p) {
    double m = 0.0;
    for (double v : p.intensities) m = std::max(m, std::abs(v));
    return m > 0.0 ? m : 1.0;
}

inline OracleReport compute_oracle_compare(const RunConfig& cfg) {
    if (cfg.mode != InputMode::natural)
        throw ConfigError("oracle-compare needs natural_units = true (hbar = m = eps = k_B = 1)");
    const auto setup = setup_of(cfg);
    const auto grid = symmetric_grid(grid_span_of(cfg, setup), cfg.grid_points);
    const double t = cfg.natural.flight_time;

    OracleReport rep;
    const auto solved = oracle::diagonal_solve(cfg.physical, t, grid);
    rep.oracle = solved.profile;
    rep.doubling_change = solved.doubling_change;
    const double peak = peak_of(rep.oracle);

    const bool free = cfg.natural.theta == 0.0 && cfg.natural.kappa == 0.0;
    std::optional<PatternProfile> analytic;
    if (free) {
        analytic = free_profile(cfg.physical, t, grid);
        rep.oracle_free_rel = max_abs_diff(rep.oracle, *analytic) / peak_of(*analytic);
    }

    bool pub_ok = false, cal_ok = false;
    for (auto c : {Convention::published, Convention::calibrated}) {
        auto prof = closedform::pattern_exact(setup, grid, c);
        VariantDeviation d;
        d.convention = c;
        d.max_abs = max_abs_diff(prof, rep.oracle);
        d.max_rel = d.max_abs / peak;
        if (analytic) d.free_rel = max_abs_diff(prof, *analytic) / peak_of(*analytic);
        (c == Convention::published ? pub_ok : cal_ok) = d.max_rel < kMatchTolerance;
        rep.deviations.push_back(d);
        rep.variants.push_back(std::move(prof));
    }
    rep.winner = pub_ok && cal_ok ? "both" : pub_ok ? "published" : cal_ok ? "calibrated" : "none";
    return rep;
}

inline OracleReport run_oracle_compare(const RunConfig& cfg, const fs::path& out_dir) {
    auto rep = compute_oracle_compare(cfg);
    const auto setup = setup_of(cfg);

    std::string csv = "x,oracle,published,calibrated\n";
    for (std::size_t i = 0; i < rep.oracle.size(); ++i) {
        csv += format_double(rep.oracle.positions[i]) + "," + format_double(rep.oracle.intensities[i]) + "," +
               format_double(rep.variants[0].intensities[i]) + "," + format_double(rep.variants[1].intensities[i]) +
               "\n";
    }

    ProfileMeta meta;
    meta.source = Source::oracle;
    meta.convention = cfg.variant;
    meta.timestamp = timestamp_now();
    json j = sidecar("oracle-compare", cfg, setup, meta);
    j["doubling_change"] = rep.doubling_change;
    j["winner"] = rep.winner;
    j["match_tolerance"] = kMatchTolerance;
    for (const auto& d : rep.deviations) {
        json v{{"max_abs_deviation", d.max_abs}, {"max_rel_deviation", d.max_rel}};
        if (d.free_rel) {
            v["free_analytic_rel_deviation"] = *d.free_rel;
            v["matches_free_analytic"] = *d.free_rel < kFreeMatchTolerance;
        }
        j["variants"][std::string(to_string(d.convention))] = v;
    }
    if (rep.oracle_free_rel) j["oracle_free_analytic_rel_deviation"] = *rep.oracle_free_rel;

    ensure_directory(out_dir);
    write_text(out_dir / "oracle_compare.csv", csv);
    write_text(out_dir / "oracle_compare.json", j.dump(2) + "\n");
    return rep;
}

// ---------------------------------------------------------------- sweep

/// Apply one swept value. Sweeping the mass keeps the beam velocity fixed:
/// the de Broglie wavelength scales as 1/m, so the flight time is unchanged.
inline void apply_sweep_value(RunConfig& cfg, const std::string& param, double value) {
    if (param == "mass_kg" && cfg.mode == InputMode::physical) {
        if (!(value > 0.0)) throw ValidationError("mass", "must be strictly positive");
        cfg.physical.de_broglie_wavelength *= cfg.physical.mass / value;
    }
    if (!set_parameter(cfg, param, value)) throw ConfigError("cannot sweep '" + param + "'");
}

struct SweepPoint {
    std::size_t index = 0;
    double value1 = 0.0;
    std::optional<double> value2;
    std::vector<VisibilityRow> rows; // visibility output
    std::optional<PatternProfile> profile; // profiles output
    RunConfig config;
    std::string error; // empty on success
};

inline std::vector<std::pair<double, std::optional<double>>> sweep_grid(const SweepSpec& s) {
    std::vector<std::pair<double, std::optional<double>>> pts;
    for (double a : s.first.values) {
        if (!s.second) {
            pts.emplace_back(a, std::nullopt);
            continue;
        }
        for (double b : s.second->values) pts.emplace_back(a, b);
    }
    return pts;
}

inline SweepPoint evaluate_point(const RunConfig& base, std::size_t index, double v1, std::optional<double> v2) {
    SweepPoint pt;
    pt.index = index;
    pt.value1 = v1;
    pt.value2 = v2;
    pt.config = base;
    pt.config.sweep.reset();
    try {
        apply_sweep_value(pt.config, base.sweep->first.param, v1);
        if (v2) apply_sweep_value(pt.config, base.sweep->second->param, *v2);
        if (base.sweep->output == SweepOutput::visibility) {
            pt.rows = compute_visibility(pt.config);
        } else {
            const auto setup = setup_of(pt.config);
            const auto grid = symmetric_grid(grid_span_of(pt.config, setup), pt.config.grid_points);
            pt.profile = compute_pattern(pt.config, setup, grid);
        }
    } catch (const std::exception& e) {
        pt.error = e.what();
    }
    return pt;
}

/// Evaluate every grid point (first axis outer), concurrently, and return
/// them in sweep order.
inline std::vector<SweepPoint> compute_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep needs sweep_param and sweep_values");
    const auto pts = sweep_grid(*cfg.sweep);
    std::vector<SweepPoint> out(pts.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), pts.size()));
    for (std::size_t start = 0; start < pts.size(); start += workers) {
        std::vector<std::future<SweepPoint>> batch;
        for (std::size_t i = start; i < std::min(pts.size(), start + workers); ++i)
            batch.push_back(std::async(std::launch::async, evaluate_point, std::cref(cfg), i, pts[i].first, pts[i].second));
        for (std::size_t i = 0; i < batch.size(); ++i) out[start + i] = batch[i].get();
    }
    return out;
}

inline std::string sweep_csv(const RunConfig& cfg, const std::vector<SweepPoint>& points) {
    const auto& s = *cfg.sweep;
    const bool two = s.second.has_value();
    std::string head = "point," + s.first.param + (two ? "," + s.second->param : "");
    std::string csv;
    if (s.output == SweepOutput::visibility) {
        csv = head + ",fringe_index,x_n_m,formula,numeric,discrepancy,status,error\n";
        for (const auto& p : points) {
            std::string lead = std::to_string(p.index) + "," + format_double(p.value1) +
                               (two ? "," + format_double(*p.value2) : "");
            if (!p.error.empty()) {
                csv += lead + ",,,,,,error," + json(p.error).dump() + "\n";
                continue;
            }
            for (const auto& r : p.rows) {
                csv += lead + "," + std::to_string(r.fringe_index) + "," + format_double(r.position) + "," +
                       format_double(r.formula) + "," + optional_field(r.numeric) + "," +
                       optional_field(r.discrepancy()) + "," + std::string(closedform::to_string(r.status)) + ",\n";
            }
        }
    } else {
        csv = head + ",file,status,error\n";
        for (const auto& p : points) {
            csv += std::to_string(p.index) + "," + format_double(p.value1) + (two ? "," + format_double(*p.value2) : "") +
                   "," + (p.error.empty() ? "profile_" + std::to_string(p.index) + ".csv,ok," : ",error," + json(p.error).dump()) +
                   "\n";
        }
    }
    return csv;
}

inline std::vector<SweepPoint> run_sweep(const RunConfig& cfg, const fs::path& out_dir) {
    auto points = compute_sweep(cfg);
    const std::string stamp = timestamp_now();
    ensure_directory(out_dir);
    write_text(out_dir / "sweep.csv", sweep_csv(cfg, points));
    if (cfg.sweep->output == SweepOutput::profiles) {
        for (auto& p : points) {
            if (!p.profile) continue;
            p.profile->meta.timestamp = stamp;
            const std::string stem = "profile_" + std::to_string(p.index);
            write_text(out_dir / (stem + ".csv"), profile_csv(*p.profile));
            write_text(out_dir / (stem + ".json"),
                       sidecar("sweep", p.config, setup_of(p.config), p.profile->meta).dump(2) + "\n");
        }
    }
    ProfileMeta meta;
    meta.convention = cfg.variant;
    meta.source = cfg.model == Model::weak ? Source::weak : Source::exact;
    meta.timestamp = stamp;
    json j;
    j["tool"] = "dslit";
    j["version"] = std::string(version);
    j["command"] = "sweep";
    j["timestamp"] = stamp;
    j["config"] = to_json(cfg);
    j["points"] = points.size();
    std::size_t failed = 0;
    for (const auto& p : points) failed += p.error.empty() ? 0 : 1;
    j["failed_points"] = failed;
    write_text(out_dir / "sweep.json", j.dump(2) + "\n");
    return points;
}

// ---------------------------------------------------------------- entry point

struct Overrides {
    std::string config;
    std::string out = ".";
    std::optional<double> grid_span;
    std::optional<std::size_t> grid_points;
    std::optional<std::string> variant;
    std::optional<std::string> model;
};

inline RunConfig resolve(const Overrides& o) {
    RunConfig cfg = load_config(o.config);
    if (o.grid_span) cfg.grid_span = *o.grid_span;
    if (o.grid_points) cfg.grid_points = *o.grid_points;
    if (o.variant) cfg.variant = convention_from_string(*o.variant);
    if (o.model) cfg.model = model_from_string(*o.model);
    check(cfg);
    return cfg;
}

inline void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
}

inline int dispatch(const std::string& command, const Overrides& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = resolve(o);
    const fs::path dir(o.out);
    if (command == "pattern") {
        const auto prof = run_pattern(cfg, dir);
        print_warnings(err, prof.meta.warnings);
        out << "wrote " << (dir / "pattern.csv").string() << " (" << prof.size() << " points)\n";
    } else if (command == "visibility") {
        const auto rows = run_visibility(cfg, dir);
        for (const auto& r : rows) {
            out << "fringe " << r.fringe_index << ": formula " << r.formula << ", numeric "
                << (r.numeric ? format_double(*r.numeric) : std::string("-")) << " ("
                << closedform::to_string(r.status) << ")\n";
        }
    } else if (command == "oracle-compare") {
        const auto rep = run_oracle_compare(cfg, dir);
        for (const auto& d : rep.deviations)
            out << to_string(d.convention) << ": max relative deviation " << d.max_rel << "\n";
        out << "node-doubling change " << rep.doubling_change << ", winner: " << rep.winner << "\n";
    } else if (command == "sweep") {
        const auto points = run_sweep(cfg, dir);
        std::size_t failed = 0;
        for (const auto& p : points) {
            if (p.error.empty()) continue;
            ++failed;
            err << "point " << p.index << ": " << p.error << "\n";
        }
        out << "wrote " << (dir / "sweep.csv").string() << " (" << points.size() << " points, " << failed
            << " failed)\n";
    }
    return exit_ok;
}

/// Print `error` and map it to the documented exit code.
inline int report_error(std::exception_ptr error, std::ostream& err) {
    try {
        std::rethrow_exception(error);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const ValidationError& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return exit_config;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const ConvergenceError& e) {
        err << "oracle did not converge: " << e.what() << "\n";
        return exit_convergence;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (...) {
        err << "unknown error\n";
        return exit_numerical;
    }
}

inline int main_entry(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Double-slit interference under environmental decoherence"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    Overrides o;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"pattern", "screen intensity profile (CSV + JSON sidecar)"},
        {"visibility", "fringe visibility by formula and by extremum search"},
        {"oracle-compare", "check both exact-pattern variants against the master-equation solver"},
        {"sweep", "batch over one or two parameters"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "run configuration file")->required();
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--grid-span", o.grid_span, "half width of the screen window (m, or eps in natural units)");
        sub->add_option("--grid-points", o.grid_points, "number of screen samples");
        sub->add_option("--variant", o.variant, "closed-form constants")
            ->check(CLI::IsMember({"published", "calibrated"}));
        sub->add_option("--model", o.model, "closed-form model")->check(CLI::IsMember({"weak", "exact"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(command, o, out, err);
    } catch (...) {
        return report_error(std::current_exception(), err);
    }
}

} // namespace dslit::cli
