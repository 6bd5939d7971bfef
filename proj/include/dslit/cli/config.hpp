#pragma once

// Run configuration: a flat `key = value` text format with unit suffixes in
// the key names, and its JSON mirror used by the output sidecars.
//
// Three input modes, selected by which keys are present:
//   physical  full SI parameters (mass_kg, ..., temperature_K)
//   ratio     SI geometry plus t_ratio = t_L / tau_D; gamma, T, m unused
//   natural   natural_units = true; hbar = m = eps = k_B = 1 and the groups
//             (slit_separation_nat, flight_time_nat, theta, kappa) given directly

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "dslit/errors.hpp"
#include "dslit/params.hpp"
#include "dslit/profile.hpp"

namespace dslit::cli {

enum class InputMode { physical, ratio, natural };
enum class Model { weak, exact };
enum class SweepOutput { visibility, profiles };

inline std::string_view to_string(InputMode m) {
    switch (m) {
    case InputMode::physical: return "physical";
    case InputMode::ratio: return "ratio";
    case InputMode::natural: return "natural";
    }
    return "unknown";
}

inline std::string_view to_string(Model m) { return m == Model::weak ? "weak" : "exact"; }
inline std::string_view to_string(SweepOutput o) { return o == SweepOutput::visibility ? "visibility" : "profiles"; }

struct NaturalSetup {
    double dtilde = 0.0;
    double flight_time = 1.0;
    double theta = 0.0;
    double kappa = 0.0;

    bool operator==(const NaturalSetup&) const = default;
};

struct SweepAxis {
    std::string param; // one of sweep_parameters()
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
    SweepAxis first;
    std::optional<SweepAxis> second;
    SweepOutput output = SweepOutput::visibility;

    bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
    InputMode mode = InputMode::physical;
    PhysicalParams physical; // physical mode; geometry part also used in ratio mode
    double t_ratio = 0.0;    // ratio mode
    NaturalSetup natural;    // natural mode

    double grid_span = 0.0; // half width of the screen window; 0 picks one from the pattern width
    std::size_t grid_points = 1001;
    Model model = Model::exact;
    Convention variant = Convention::calibrated;
    std::vector<int> fringe_indices{0, 1, 2};
    std::optional<SweepSpec> sweep;

    bool operator==(const RunConfig&) const = default;
};

/// Parameters a sweep may vary, by config key.
inline const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"mass_kg", "temperature_K", "coupling_rate_per_s",
                                                "slit_separation_m", "t_ratio"};
    return names;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError(std::string(key) + ": not a number: '" + std::string(text) + "'");
    if (!std::isfinite(v)) throw ConfigError(std::string(key) + ": must be finite");
    return v;
}

inline long long parse_int(std::string_view key, std::string_view text) {
    long long v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError(std::string(key) + ": not an integer: '" + std::string(text) + "'");
    return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError(std::string(key) + ": expected true or false");
}

inline std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

inline std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError(std::string(key) + ": empty list");
    return out;
}

using KeyValues = std::map<std::string, std::string, std::less<>>;

inline KeyValues read_pairs(std::istream& in) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(text).substr(0, eq));
        std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) throw ConfigError(key + ": empty value");
        if (!kv.emplace(key, value).second) throw ConfigError(key + ": given more than once");
    }
    return kv;
}

class Reader {
public:
    explicit Reader(KeyValues kv) : kv_(std::move(kv)) {}

    bool has(std::string_view key) const { return kv_.find(key) != kv_.end(); }

    const std::string& raw(std::string_view key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("missing required key '" + std::string(key) + "'");
        used_.insert(it->first);
        return it->second;
    }

    double number(std::string_view key) { return parse_double(key, raw(key)); }
    double number(std::string_view key, double fallback) { return has(key) ? number(key) : fallback; }

    void reject_unused() const {
        for (const auto& [key, value] : kv_)
            if (!used_.count(key)) throw ConfigError("unknown or unused key '" + key + "'");
    }

private:
    KeyValues kv_;
    std::set<std::string, std::less<>> used_;
};

} // namespace detail

/// Set one sweepable parameter. Returns false if `key` is not one of
/// sweep_parameters() or does not apply to the config's input mode.
inline bool set_parameter(RunConfig& cfg, std::string_view key, double value) {
    if (cfg.mode == InputMode::natural) return false;
    if (key == "slit_separation_m") {
        cfg.physical.slit_separation = value;
        return true;
    }
    if (cfg.mode == InputMode::ratio) {
        if (key != "t_ratio") return false;
        cfg.t_ratio = value;
        return true;
    }
    if (key == "mass_kg") cfg.physical.mass = value;
    else if (key == "temperature_K") cfg.physical.temperature = value;
    else if (key == "coupling_rate_per_s") cfg.physical.coupling_rate = value;
    else return false;
    return true;
}

inline SweepOutput sweep_output_from_string(std::string_view s) {
    if (s == "visibility") return SweepOutput::visibility;
    if (s == "profiles") return SweepOutput::profiles;
    throw ConfigError("sweep_output: expected visibility or profiles");
}

inline Model model_from_string(std::string_view s) {
    if (s == "weak") return Model::weak;
    if (s == "exact") return Model::exact;
    throw ConfigError("model: expected weak or exact");
}

/// Structural checks shared by the text and JSON paths. Physical ranges are
/// checked later by dslit::validate when the run starts.
inline void check(const RunConfig& cfg) {
    if (cfg.grid_points < 16) throw ConfigError("grid_points: need at least 16");
    if (cfg.grid_span < 0.0 || !std::isfinite(cfg.grid_span))
        throw ConfigError("grid_span: must be positive and finite");
    if (cfg.fringe_indices.empty()) throw ConfigError("fringe_indices: empty list");
    if (cfg.mode == InputMode::ratio && cfg.t_ratio < 0.0) throw ConfigError("t_ratio: must be non-negative");
    if (!cfg.sweep) return;
    auto check_axis = [&](const SweepAxis& axis) {
        const auto& names = sweep_parameters();
        if (std::find(names.begin(), names.end(), axis.param) == names.end())
            throw ConfigError("sweep_param: unknown parameter '" + axis.param + "'");
        RunConfig probe = cfg;
        if (!set_parameter(probe, axis.param, 0.0))
            throw ConfigError("sweep_param: '" + axis.param + "' cannot be swept in " +
                              std::string(to_string(cfg.mode)) + " mode");
        if (axis.values.empty()) throw ConfigError("sweep_values: empty list");
        for (double v : axis.values)
            if (!std::isfinite(v)) throw ConfigError("sweep_values: must be finite");
    };
    check_axis(cfg.sweep->first);
    if (cfg.sweep->second) {
        check_axis(*cfg.sweep->second);
        if (cfg.sweep->second->param == cfg.sweep->first.param)
            throw ConfigError("sweep_param2: same parameter as sweep_param");
    }
}

inline RunConfig parse_config(std::istream& in) {
    detail::Reader r(detail::read_pairs(in));
    RunConfig cfg;

    const bool natural = r.has("natural_units") && detail::parse_bool("natural_units", r.raw("natural_units"));
    if (natural) {
        cfg.mode = InputMode::natural;
        cfg.natural.dtilde = r.number("slit_separation_nat");
        cfg.natural.flight_time = r.number("flight_time_nat");
        cfg.natural.theta = r.number("theta");
        cfg.natural.kappa = r.number("kappa");
        cfg.grid_span = r.number("grid_span_nat", 0.0);
        cfg.physical = natural_units(cfg.natural.dtilde, cfg.natural.flight_time, cfg.natural.theta,
                                     cfg.natural.kappa);
    } else {
        auto& p = cfg.physical;
        p.slit_separation = r.number("slit_separation_m");
        p.packet_width = r.number("packet_width_m");
        p.de_broglie_wavelength = r.number("de_broglie_wavelength_m");
        p.path_length = r.number("path_length_m");
        if (r.has("t_ratio")) {
            cfg.mode = InputMode::ratio;
            cfg.t_ratio = r.number("t_ratio");
        } else {
            cfg.mode = InputMode::physical;
            p.mass = r.number("mass_kg");
            p.coupling_rate = r.number("coupling_rate_per_s");
            p.temperature = r.number("temperature_K");
            p.hbar = r.number("hbar_J_s", codata::hbar);
            p.boltzmann = r.number("boltzmann_J_per_K", codata::boltzmann);
        }
        cfg.grid_span = r.number("grid_span_m", 0.0);
    }

    if (r.has("grid_points")) {
        const long long n = detail::parse_int("grid_points", r.raw("grid_points"));
        if (n < 16) throw ConfigError("grid_points: need at least 16");
        cfg.grid_points = static_cast<std::size_t>(n);
    }
    if (r.has("model")) cfg.model = model_from_string(r.raw("model"));
    if (r.has("variant")) cfg.variant = convention_from_string(r.raw("variant"));
    if (r.has("fringe_indices")) {
        cfg.fringe_indices.clear();
        for (const auto& item : detail::split_list(r.raw("fringe_indices")))
            cfg.fringe_indices.push_back(static_cast<int>(detail::parse_int("fringe_indices", item)));
    }

    if (r.has("sweep_param")) {
        SweepSpec s;
        s.first = {r.raw("sweep_param"), detail::parse_double_list("sweep_values", r.raw("sweep_values"))};
        if (r.has("sweep_param2"))
            s.second = SweepAxis{r.raw("sweep_param2"),
                                 detail::parse_double_list("sweep_values2", r.raw("sweep_values2"))};
        if (r.has("sweep_output")) s.output = sweep_output_from_string(r.raw("sweep_output"));
        cfg.sweep = std::move(s);
    }

    r.reject_unused();
    check(cfg);
    return cfg;
}

inline RunConfig parse_config_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    return parse_config(in);
}

// JSON mirror. Doubles are written by nlohmann/json with round-trip precision,
// so to_json followed by from_json reproduces the config exactly.

inline nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["mode"] = std::string(to_string(cfg.mode));
    const auto& p = cfg.physical;
    if (cfg.mode == InputMode::natural) {
        j["natural_units"] = true;
        j["slit_separation_nat"] = cfg.natural.dtilde;
        j["flight_time_nat"] = cfg.natural.flight_time;
        j["theta"] = cfg.natural.theta;
        j["kappa"] = cfg.natural.kappa;
        j["grid_span_nat"] = cfg.grid_span;
    } else {
        j["slit_separation_m"] = p.slit_separation;
        j["packet_width_m"] = p.packet_width;
        j["de_broglie_wavelength_m"] = p.de_broglie_wavelength;
        j["path_length_m"] = p.path_length;
        if (cfg.mode == InputMode::ratio) {
            j["t_ratio"] = cfg.t_ratio;
        } else {
            j["mass_kg"] = p.mass;
            j["coupling_rate_per_s"] = p.coupling_rate;
            j["temperature_K"] = p.temperature;
            j["hbar_J_s"] = p.hbar;
            j["boltzmann_J_per_K"] = p.boltzmann;
        }
        j["grid_span_m"] = cfg.grid_span;
    }
    j["grid_points"] = cfg.grid_points;
    j["model"] = std::string(to_string(cfg.model));
    j["variant"] = std::string(to_string(cfg.variant));
    j["fringe_indices"] = cfg.fringe_indices;
    if (cfg.sweep) {
        nlohmann::json s;
        s["sweep_param"] = cfg.sweep->first.param;
        s["sweep_values"] = cfg.sweep->first.values;
        if (cfg.sweep->second) {
            s["sweep_param2"] = cfg.sweep->second->param;
            s["sweep_values2"] = cfg.sweep->second->values;
        }
        s["sweep_output"] = std::string(to_string(cfg.sweep->output));
        j["sweep"] = s;
    }
    return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    try {
        RunConfig cfg;
        const auto mode = j.at("mode").get<std::string>();
        if (mode == "natural") {
            cfg.mode = InputMode::natural;
            cfg.natural.dtilde = j.at("slit_separation_nat").get<double>();
            cfg.natural.flight_time = j.at("flight_time_nat").get<double>();
            cfg.natural.theta = j.at("theta").get<double>();
            cfg.natural.kappa = j.at("kappa").get<double>();
            cfg.grid_span = j.at("grid_span_nat").get<double>();
            cfg.physical = natural_units(cfg.natural.dtilde, cfg.natural.flight_time, cfg.natural.theta,
                                         cfg.natural.kappa);
        } else {
            auto& p = cfg.physical;
            p.slit_separation = j.at("slit_separation_m").get<double>();
            p.packet_width = j.at("packet_width_m").get<double>();
            p.de_broglie_wavelength = j.at("de_broglie_wavelength_m").get<double>();
            p.path_length = j.at("path_length_m").get<double>();
            if (mode == "ratio") {
                cfg.mode = InputMode::ratio;
                cfg.t_ratio = j.at("t_ratio").get<double>();
            } else if (mode == "physical") {
                cfg.mode = InputMode::physical;
                p.mass = j.at("mass_kg").get<double>();
                p.coupling_rate = j.at("coupling_rate_per_s").get<double>();
                p.temperature = j.at("temperature_K").get<double>();
                p.hbar = j.at("hbar_J_s").get<double>();
                p.boltzmann = j.at("boltzmann_J_per_K").get<double>();
            } else {
                throw ConfigError("mode: unknown input mode '" + mode + "'");
            }
            cfg.grid_span = j.at("grid_span_m").get<double>();
        }
        cfg.grid_points = j.at("grid_points").get<std::size_t>();
        cfg.model = model_from_string(j.at("model").get<std::string>());
        cfg.variant = convention_from_string(j.at("variant").get<std::string>());
        cfg.fringe_indices = j.at("fringe_indices").get<std::vector<int>>();
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            SweepSpec spec;
            spec.first = {s.at("sweep_param").get<std::string>(), s.at("sweep_values").get<std::vector<double>>()};
            if (s.contains("sweep_param2"))
                spec.second = SweepAxis{s.at("sweep_param2").get<std::string>(),
                                        s.at("sweep_values2").get<std::vector<double>>()};
            spec.output = sweep_output_from_string(s.at("sweep_output").get<std::string>());
            cfg.sweep = std::move(spec);
        }
        check(cfg);
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
}

} // namespace dslit::cli
