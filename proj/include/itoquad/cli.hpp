#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <algorithm>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bench.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "report_io.hpp"

namespace itoquad {

enum class output_format { csv, json };

/// Thrown by parse_manifest for --help; carries the rendered help text.
struct help_requested {
    std::string text;
};

struct RunManifest {
    std::string subcommand;  // strong-error | weak-error | noise-sweep | bench
    ExperimentConfig config;
    std::string output_path;  // empty: stdout
    output_format format = output_format::csv;
    regime sweep_regime = regime::floor;
    std::vector<double> deltas;
    std::vector<std::size_t> thread_list;
};

namespace detail {

struct cli_values {
    std::optional<std::string> config_file;
    std::optional<std::string> problem;
    std::optional<std::vector<std::size_t>> n_list;
    std::optional<std::size_t> replicates;
    std::optional<std::size_t> l_ref;
    std::optional<std::uint64_t> seed;
    std::optional<double> horizon;
    std::optional<double> r;
    std::optional<double> d1;
    std::optional<double> d2;
    std::optional<std::string> px;
    std::optional<std::string> pw;
    std::optional<std::string> coupling;
    std::optional<std::size_t> threads;
    std::optional<std::size_t> bootstrap;
    std::optional<std::size_t> fine_cap;
    std::optional<double> payoff_strike;
    std::optional<double> strike;
    std::optional<double> sigma;
    std::optional<double> s0;
    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<double> value;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::string regime_name = "floor";
    std::optional<std::vector<double>> deltas;
    std::optional<std::vector<std::size_t>> thread_list;
};

inline void add_common(CLI::App& sub, cli_values& v) {
    sub.add_option("--config", v.config_file, "JSON config file; flags override its keys");
    sub.add_option("--problem", v.problem, "x1|x2|x3|x4|sde|const");
    sub.add_option("--n", v.n_list, "comma-separated increasing mesh sizes")->delimiter(',');
    sub.add_option("--M", v.replicates, "replicates per n (default 2048)");
    sub.add_option("--L-ref", v.l_ref, "reference refinement factor (default 1000)");
    sub.add_option("--seed", v.seed, "master seed");
    sub.add_option("--T", v.horizon, "horizon (default 1)");
    sub.add_option("--r", v.r, "moment order of the strong error (default 2)");
    sub.add_option("--d1", v.d1, "precision level for X");
    sub.add_option("--d2", v.d2, "precision level for W");
    sub.add_option("--px", v.px, "X disturbance: one|identity|xt-squared|linear-drift-t|sqrt-abs|x-abs-x-half");
    sub.add_option("--pw", v.pw, "W disturbance (same kinds as --px)");
    sub.add_option("--coupling", v.coupling, "none|inv-sqrt-n");
    sub.add_option("--threads", v.threads, "worker threads (default $ITOQUAD_THREADS or hardware)");
    sub.add_option("--bootstrap", v.bootstrap, "bootstrap resamples for standard errors (default 500)");
    sub.add_option("--fine-cap", v.fine_cap, "maximum fine-grid steps per bundle");
    sub.add_option("--payoff-strike", v.payoff_strike, "strike of the weak-error payoff (default 2)");
    sub.add_option("--strike", v.strike, "x3 strike K (default 9)");
    sub.add_option("--sigma", v.sigma, "x3 volatility (default 1)");
    sub.add_option("--s0", v.s0, "x3 initial price (default 1)");
    sub.add_option("--lambda", v.lambda, "x4 Poisson intensity (default 5)");
    sub.add_option("--mu", v.mu, "sde drift (default 3)");
    sub.add_option("--value", v.value, "value of the const integrand");
    sub.add_option("--out", v.out, "output file (default stdout)");
    sub.add_option("--format", v.format, "csv|json (default: from --out extension, else csv)");
}

template <class T, class F>
void apply(const std::optional<T>& o, F&& f) {
    if (o) f(*o);
}

/// Fails when `path` cannot be created or written, leaving no new file behind.
inline void check_writable(const std::string& path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const bool existed = fs::exists(path, ec);
    {
        std::ofstream probe(path, std::ios::app);
        if (!probe) throw io_error("cannot write to '" + path + "'");
    }
    if (!existed) fs::remove(path, ec);
}

}  // namespace detail

/// Parses command-line arguments (without the program name) into a fully
/// materialized manifest. Throws config_error / io_error; CLI::ParseError
/// escapes for --help and malformed flags.
inline RunManifest parse_manifest(std::vector<std::string> args) {
    CLI::App app{"Riemann-Maruyama quadrature under noisy information: Monte Carlo error experiments", "itoquad"};
    app.require_subcommand(1);
    detail::cli_values v;
    auto* strong = app.add_subcommand("strong-error", "strong L^r error versus n");
    auto* weak = app.add_subcommand("weak-error", "weak error of the put payoff versus n");
    auto* sweep = app.add_subcommand("noise-sweep", "noise-regime experiments (floor|coupled|blowup)");
    auto* bench_cmd = app.add_subcommand("bench", "thread-scaling benchmark of a strong-error workload");
    for (auto* s : {strong, weak, sweep, bench_cmd}) detail::add_common(*s, v);
    sweep->add_option("--regime", v.regime_name, "floor|coupled|blowup")->capture_default_str();
    sweep->add_option("--deltas", v.deltas, "floor-regime precision levels")->delimiter(',');
    bench_cmd->add_option("--thread-list", v.thread_list, "thread counts to time")->delimiter(',');

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream text;
        app.exit(e, text, text);
        throw help_requested{text.str()};
    }

    RunManifest m;
    for (auto* s : {strong, weak, sweep, bench_cmd}) {
        if (s->parsed()) m.subcommand = s->get_name();
    }

    ExperimentConfig c;
    c.threads = default_threads();
    bool have_problem = false;
    if (v.config_file) {
        json j;
        try {
            j = json::parse(read_file(*v.config_file));
        } catch (const json::exception& e) {
            throw config_error("cannot parse '" + *v.config_file + "': " + e.what());
        }
        c = config_from_json(j, c);
        have_problem = j.contains("problem");
    }
    detail::apply(v.problem, [&](const std::string& s) {
        c.problem.kind = parse_integrand_kind(s);
        have_problem = true;
    });
    if (!have_problem) {
        if (m.subcommand == "weak-error") c.problem.kind = integrand_kind::sde_kernel;
        else if (m.subcommand == "bench") c.problem.kind = integrand_kind::x1_wiener;
        else throw config_error("missing required field: problem (--problem or config key)");
    }
    detail::apply(v.n_list, [&](const auto& x) { c.n_list = x; });
    detail::apply(v.replicates, [&](auto x) { c.replicates = x; });
    detail::apply(v.l_ref, [&](auto x) { c.l_ref = x; });
    detail::apply(v.seed, [&](auto x) { c.seed = x; });
    detail::apply(v.horizon, [&](auto x) { c.horizon = x; });
    detail::apply(v.r, [&](auto x) { c.r = x; });
    detail::apply(v.d1, [&](auto x) { c.noise.delta1 = x; });
    detail::apply(v.d2, [&](auto x) { c.noise.delta2 = x; });
    detail::apply(v.px, [&](const auto& x) { c.noise.p_x = parse_disturbance(x); });
    detail::apply(v.pw, [&](const auto& x) { c.noise.p_w = parse_disturbance(x); });
    detail::apply(v.coupling, [&](const auto& x) { c.coupling = parse_coupling(x); });
    detail::apply(v.threads, [&](auto x) { c.threads = x; });
    detail::apply(v.bootstrap, [&](auto x) { c.bootstrap_resamples = x; });
    detail::apply(v.fine_cap, [&](auto x) { c.fine_cap = x; });
    detail::apply(v.payoff_strike, [&](auto x) { c.payoff_strike = x; });
    detail::apply(v.strike, [&](auto x) { c.problem.strike = x; });
    detail::apply(v.sigma, [&](auto x) { c.problem.sigma = x; });
    detail::apply(v.s0, [&](auto x) { c.problem.s0 = x; });
    detail::apply(v.lambda, [&](auto x) { c.problem.intensity = x; });
    detail::apply(v.mu, [&](auto x) { c.problem.mu = x; });
    detail::apply(v.value, [&](auto x) { c.problem.value = x; });
    if (c.n_list.empty()) {
        c.n_list = m.subcommand == "bench" ? std::vector<std::size_t>{1024} : default_n_list(c.problem);
    }

    const error_mode mode = m.subcommand == "weak-error" ? error_mode::weak
                            : c.problem.kind == integrand_kind::x1_wiener ? error_mode::strong_exact
                                                                          : error_mode::strong_reference;
    validate(c, mode);

    if (m.subcommand == "noise-sweep") {
        m.sweep_regime = parse_regime(v.regime_name);
        const ClassTag& tag = c.noise.p_w.class_tag();
        if (m.sweep_regime == regime::floor && tag.fam != ClassTag::family::k2) {
            throw config_error("floor regime needs a K2-class W disturbance, got " + c.noise.p_w.name() + " (" +
                               tag.to_string() + ")");
        }
        if (m.sweep_regime == regime::blowup) {
            if (tag.fam == ClassTag::family::k2 || tag.fam == ClassTag::family::k1) {
                throw config_error("blowup regime needs a K2bar or K3 W disturbance, got " + c.noise.p_w.name() +
                                   " (" + tag.to_string() + ")");
            }
            if (!(c.noise.delta2 > 0.0)) throw config_error("blowup regime needs --d2 > 0");
        }
        m.deltas = v.deltas ? *v.deltas : std::vector<double>(std::begin(default_delta_sweep), std::end(default_delta_sweep));
        for (double d : m.deltas) {
            if (d < 0.0) throw config_error("precision levels must be non-negative");
        }
    }
    if (m.subcommand == "bench") {
        m.thread_list = v.thread_list ? *v.thread_list : std::vector<std::size_t>{1, 2, 4, 8};
        if (m.thread_list.empty()) throw config_error("thread list is empty");
        for (auto t : m.thread_list) {
            if (t == 0) throw config_error("thread count must be at least 1");
        }
    }
    m.config = std::move(c);

    if (v.out) m.output_path = *v.out;
    if (v.format) {
        if (*v.format == "csv") m.format = output_format::csv;
        else if (*v.format == "json") m.format = output_format::json;
        else throw config_error("unknown output format '" + *v.format + "' (expected csv|json)");
    } else if (m.output_path.size() >= 5 && m.output_path.ends_with(".json")) {
        m.format = output_format::json;
    }
    if (!m.output_path.empty()) detail::check_writable(m.output_path);
    return m;
}

/// Runs a parsed manifest and writes its output. Returns the process exit code.
inline int run_manifest(const RunManifest& m, std::ostream& out = std::cout) {
    std::string text;
    if (m.subcommand == "bench") {
        const auto rows = bench(m.config, m.thread_list);
        text = m.format == output_format::json ? bench_to_json(rows) : bench_to_csv(rows);
    } else {
        std::vector<ErrorReport> reports;
        if (m.subcommand == "strong-error") reports.push_back(strong_error(m.config));
        else if (m.subcommand == "weak-error") reports.push_back(weak_error(m.config));
        else if (m.subcommand == "noise-sweep") reports = noise_regime_sweep(m.config, m.sweep_regime, m.deltas);
        else throw config_error("unknown subcommand '" + m.subcommand + "'");
        text = m.format == output_format::json ? reports_to_json(reports) : reports_to_csv(reports);
    }
    if (m.output_path.empty()) {
        out << text;
        out.flush();
    } else {
        write_file(m.output_path, text);
    }
    return 0;
}

/// Entry point shared by the executable and tests: parse, run, map errors to exit codes.
inline int cli_main(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        return run_manifest(parse_manifest(std::move(args)), out);
    } catch (const help_requested& h) {
        out << h.text;
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(exit_code::config);
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return static_cast<int>(exit_code::config);
    } catch (const resource_error& e) {
        err << "resource error: " << e.what() << '\n';
        return static_cast<int>(exit_code::resource);
    } catch (const io_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return static_cast<int>(exit_code::io);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(exit_code::failure);
    }
}

}  // namespace itoquad
