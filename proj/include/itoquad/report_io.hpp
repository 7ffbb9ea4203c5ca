#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "experiments.hpp"

namespace itoquad {

using json = nlohmann::json;

/// %.17g: enough digits to round-trip every double.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string to_string(error_mode m) {
    switch (m) {
        case error_mode::strong_exact: return "strong_exact";
        case error_mode::strong_reference: return "strong_reference";
        case error_mode::weak: return "weak";
    }
    return "strong_exact";
}

inline error_mode parse_error_mode(std::string_view s) {
    if (s == "strong_exact") return error_mode::strong_exact;
    if (s == "strong_reference") return error_mode::strong_reference;
    if (s == "weak") return error_mode::weak;
    throw config_error("unknown report mode '" + std::string(s) + "'");
}

inline std::string to_string(delta_coupling c) { return c == delta_coupling::none ? "none" : "inv-sqrt-n"; }

inline delta_coupling parse_coupling(std::string_view s) {
    if (s == "none") return delta_coupling::none;
    if (s == "inv-sqrt-n") return delta_coupling::inv_sqrt_n;
    throw config_error("unknown delta coupling '" + std::string(s) + "' (expected none|inv-sqrt-n)");
}

inline std::string to_string(regime r) {
    switch (r) {
        case regime::floor: return "floor";
        case regime::coupled: return "coupled";
        case regime::blowup: return "blowup";
    }
    return "floor";
}

inline regime parse_regime(std::string_view s) {
    if (s == "floor") return regime::floor;
    if (s == "coupled") return regime::coupled;
    if (s == "blowup") return regime::blowup;
    throw config_error("unknown regime '" + std::string(s) + "' (expected floor|coupled|blowup)");
}

/// Everything that determines a run's numbers. The thread count is left out:
/// results do not depend on it.
inline json config_to_json(const ExperimentConfig& c) {
    return json{
        {"problem", to_string(c.problem.kind)},
        {"n", c.n_list},
        {"M", c.replicates},
        {"L_ref", c.l_ref},
        {"seed", c.seed},
        {"T", c.horizon},
        {"r", c.r},
        {"delta1", c.noise.delta1},
        {"delta2", c.noise.delta2},
        {"p_x", c.noise.p_x.name()},
        {"p_w", c.noise.p_w.name()},
        {"delta_coupling", to_string(c.coupling)},
        {"bootstrap", c.bootstrap_resamples},
        {"fine_cap", c.fine_cap},
        {"payoff_strike", c.payoff_strike},
        {"strike", c.problem.strike},
        {"sigma", c.problem.sigma},
        {"S0", c.problem.s0},
        {"lambda", c.problem.intensity},
        {"mu", c.problem.mu},
        {"value", c.problem.value},
    };
}

/// Applies the keys present in `j` on top of `base`. Unknown keys are rejected.
inline ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {}) {
    if (!j.is_object()) throw config_error("config must be a JSON object");
    ExperimentConfig c = std::move(base);
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "problem") c.problem.kind = parse_integrand_kind(v.get<std::string>());
            else if (key == "n") c.n_list = v.get<std::vector<std::size_t>>();
            else if (key == "M") c.replicates = v.get<std::size_t>();
            else if (key == "L_ref") c.l_ref = v.get<std::size_t>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "T") c.horizon = v.get<double>();
            else if (key == "r") c.r = v.get<double>();
            else if (key == "delta1") c.noise.delta1 = v.get<double>();
            else if (key == "delta2") c.noise.delta2 = v.get<double>();
            else if (key == "p_x") c.noise.p_x = parse_disturbance(v.get<std::string>());
            else if (key == "p_w") c.noise.p_w = parse_disturbance(v.get<std::string>());
            else if (key == "delta_coupling") c.coupling = parse_coupling(v.get<std::string>());
            else if (key == "threads") c.threads = v.get<std::size_t>();
            else if (key == "bootstrap") c.bootstrap_resamples = v.get<std::size_t>();
            else if (key == "fine_cap") c.fine_cap = v.get<std::size_t>();
            else if (key == "payoff_strike") c.payoff_strike = v.get<double>();
            else if (key == "strike") c.problem.strike = v.get<double>();
            else if (key == "sigma") c.problem.sigma = v.get<double>();
            else if (key == "S0") c.problem.s0 = v.get<double>();
            else if (key == "lambda") c.problem.intensity = v.get<double>();
            else if (key == "mu") c.problem.mu = v.get<double>();
            else if (key == "value") c.problem.value = v.get<double>();
            else throw config_error("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("malformed config value: ") + e.what());
    }
    return c;
}

inline json report_to_json(const ErrorReport& r) {
    json pts = json::array();
    for (const auto& p : r.per_n) {
        pts.push_back({{"n", p.n},
                       {"error", p.error},
                       {"stderr", std::isnan(p.standard_error) ? json(nullptr) : json(p.standard_error)}});
    }
    return json{
        {"mode", to_string(r.mode)},
        {"label", r.label},
        {"fitted_slope", std::isnan(r.fitted_slope) ? json(nullptr) : json(r.fitted_slope)},
        {"per_n", pts},
        {"config", config_to_json(r.config)},
    };
}

inline ErrorReport report_from_json(const json& j) {
    ErrorReport r;
    try {
        r.mode = parse_error_mode(j.at("mode").get<std::string>());
        r.label = j.value("label", "");
        const auto& s = j.at("fitted_slope");
        r.fitted_slope = s.is_null() ? std::numeric_limits<double>::quiet_NaN() : s.get<double>();
        for (const auto& p : j.at("per_n")) {
            const auto& se = p.at("stderr");
            r.per_n.push_back({p.at("n").get<std::size_t>(), p.at("error").get<double>(),
                               se.is_null() ? std::numeric_limits<double>::quiet_NaN() : se.get<double>()});
        }
        r.config = config_from_json(j.at("config"));
    } catch (const json::exception& e) {
        throw config_error(std::string("malformed report: ") + e.what());
    }
    return r;
}

/// CSV table: one comment line with the run echo, a header, one row per n.
inline std::string report_to_csv(const ErrorReport& r) {
    if (r.per_n.empty()) throw contract_error("report has no rows");
    json echo{{"mode", to_string(r.mode)}, {"label", r.label}, {"config", config_to_json(r.config)}};
    std::ostringstream out;
    out << "# " << echo.dump() << '\n';
    out << "n,error,stderr,slope\n";
    for (const auto& p : r.per_n) {
        out << p.n << ',' << format_number(p.error) << ',' << format_number(p.standard_error) << ','
            << format_number(r.fitted_slope) << '\n';
    }
    return out.str();
}

inline std::string reports_to_csv(const std::vector<ErrorReport>& reports) {
    std::string out;
    for (const auto& r : reports) out += report_to_csv(r);
    return out;
}

inline std::string reports_to_json(const std::vector<ErrorReport>& reports) {
    if (reports.empty()) throw contract_error("nothing to emit");
    for (const auto& r : reports) {
        if (r.per_n.empty()) throw contract_error("report has no rows");
    }
    if (reports.size() == 1) return report_to_json(reports.front()).dump(2) + "\n";
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr.dump(2) + "\n";
}

/// Config echoed in the first line of a CSV report.
inline ExperimentConfig config_from_csv_echo(std::string_view csv) {
    if (csv.substr(0, 2) != "# ") throw config_error("CSV has no config echo");
    const auto eol = csv.find('\n');
    try {
        const auto echo = json::parse(csv.substr(2, eol == std::string_view::npos ? eol : eol - 2));
        return config_from_json(echo.at("config"));
    } catch (const json::exception& e) {
        throw config_error(std::string("malformed config echo: ") + e.what());
    }
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw io_error("failed writing '" + path + "'");
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace itoquad
