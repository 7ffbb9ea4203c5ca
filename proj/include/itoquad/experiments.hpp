#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "integrands.hpp"
#include "mesh.hpp"
#include "noise.hpp"
#include "parallel.hpp"
#include "paths.hpp"
#include "quadrature.hpp"
#include "statistics.hpp"

namespace itoquad {

enum class error_mode { strong_exact, strong_reference, weak };

/// How precision levels follow the mesh size.
enum class delta_coupling { none, inv_sqrt_n };

enum class regime { floor, coupled, blowup };

struct ExperimentConfig {
    Integrand problem;
    std::vector<std::size_t> n_list;  // empty: default_n_list(problem)
    std::size_t replicates = 2048;    // M, per n
    std::size_t l_ref = 1000;         // reference refinement factor
    NoiseSpec noise;
    std::uint64_t seed = 20190707;
    double horizon = 1.0;
    double r = 2.0;
    delta_coupling coupling = delta_coupling::none;
    std::size_t threads = 1;
    std::size_t bootstrap_resamples = 500;
    std::size_t fine_cap = default_fine_step_cap;
    double payoff_strike = 2.0;  // K of the weak-error payoff
};

/// {4, 8, ..., 4096} with a closed form, {4, ..., 256} against a dense reference.
inline std::vector<std::size_t> default_n_list(const Integrand& problem) {
    const std::size_t last = problem.kind == integrand_kind::x1_wiener ? 4096 : 256;
    std::vector<std::size_t> out;
    for (std::size_t n = 4; n <= last; n *= 2) out.push_back(n);
    return out;
}

struct ErrorPoint {
    std::size_t n = 0;
    double error = 0.0;
    double standard_error = 0.0;

    friend bool operator==(const ErrorPoint&, const ErrorPoint&) = default;
};

struct ErrorReport {
    error_mode mode = error_mode::strong_exact;
    std::vector<ErrorPoint> per_n;
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    ExperimentConfig config;
    std::string label;
};

/// Coarse and reference values of one replicate.
struct ReplicateSample {
    double coarse = 0.0;     // A_n on noisy information
    double reference = 0.0;  // closed form or exact-information A_{L n}
};

inline NoiseSpec noise_at(const ExperimentConfig& cfg, std::size_t n) {
    NoiseSpec spec = cfg.noise;
    if (cfg.coupling == delta_coupling::inv_sqrt_n) {
        spec.delta1 = 1.0 / std::sqrt(static_cast<double>(n));
        spec.delta2 = spec.delta1;
    }
    return spec;
}

/// Seed of the bundles used at mesh size n. Every n draws fresh replicates.
inline std::uint64_t seed_for_n(std::uint64_t seed, std::size_t n) { return derive_stream(seed, n, 0u); }

inline std::size_t fine_steps_for(const ExperimentConfig& cfg, error_mode mode, std::size_t n) {
    return mode == error_mode::strong_exact ? n : n * cfg.l_ref;
}

inline void validate(const ExperimentConfig& cfg, error_mode mode) {
    const auto& ns = cfg.n_list;
    if (ns.empty()) throw config_error("n list is empty");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] == 0) throw config_error("n values must be positive");
        if (i > 0 && ns[i] <= ns[i - 1]) throw config_error("n list must be strictly increasing");
    }
    if (cfg.replicates < 1) throw config_error("M must be positive");
    if (cfg.l_ref < 1) throw config_error("L_ref must be positive");
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw config_error("T must be positive");
    if (!(cfg.r >= 2.0)) throw config_error("r must be at least 2");
    if (cfg.threads < 1) throw config_error("threads must be at least 1");
    if (cfg.noise.delta1 < 0.0 || cfg.noise.delta2 < 0.0) throw config_error("precision levels must be non-negative");
    if (mode == error_mode::strong_exact && cfg.problem.kind != integrand_kind::x1_wiener) {
        throw config_error("closed-form strong error is only available for x1");
    }
    const std::size_t factor = mode == error_mode::strong_exact ? 1 : cfg.l_ref;
    if (ns.back() > cfg.fine_cap / factor) {
        throw resource_error("n * L_ref = " + std::to_string(ns.back()) + " * " + std::to_string(factor) +
                             " exceeds the fine-grid cap of " + std::to_string(cfg.fine_cap) + " steps");
    }
}

/// Replicate j at mesh size n: builds the bundle, the noisy coarse quadrature
/// on the equidistant mesh and the reference value on the same trajectory.
inline ReplicateSample sample_replicate(const ExperimentConfig& cfg, error_mode mode, std::size_t n,
                                        const std::shared_ptr<const Mesh>& fine, const NoiseSpec& noise,
                                        std::uint64_t n_seed, std::size_t j) {
    const auto bundle = make_bundle(n_seed, j, fine, cfg.problem.intensity, cfg.problem.channels());
    const Mesh& fm = *fine;
    const std::size_t stride = fm.steps() / n;

    std::vector<double> x(n);
    std::vector<double> w(n + 1);
    std::vector<double> px;
    std::vector<double> pw;
    for (std::size_t i = 0; i <= n; ++i) w[i] = bundle.w[i * stride];
    for (std::size_t i = 0; i < n; ++i) x[i] = eval_at(cfg.problem, bundle, i * stride);
    if (noise.delta1 != 0.0) {
        px.resize(n);
        for (std::size_t i = 0; i < n; ++i) px[i] = noise.p_x(fm[i * stride], x[i]);
    }
    if (noise.delta2 != 0.0) {
        pw.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) pw[i] = noise.p_w(fm[i * stride], w[i]);
    }

    ReplicateSample s;
    s.coarse = riemann_maruyama(StructuredInput{x, px, noise.delta1, w, pw, noise.delta2});

    if (mode == error_mode::strong_exact) {
        s.reference = exact_integral_x1(bundle.w.back(), cfg.horizon);
    } else {
        compensated_sum acc;
        const std::size_t nf = fm.steps();
        for (std::size_t k = 0; k < nf; ++k) {
            acc.add_product_of_difference(eval_at(cfg.problem, bundle, k), bundle.w[k + 1], bundle.w[k]);
        }
        s.reference = acc.value();
    }
    return s;
}

/// All M replicate samples at mesh size n, in replicate order.
inline std::vector<ReplicateSample> collect_samples(const ExperimentConfig& cfg, error_mode mode, std::size_t n) {
    const std::size_t nf = fine_steps_for(cfg, mode, n);
    const auto fine = make_fine_mesh(cfg.horizon, nf, cfg.fine_cap);
    const NoiseSpec noise = noise_at(cfg, n);
    const std::uint64_t n_seed = seed_for_n(cfg.seed, n);
    return run_parallel(cfg.replicates, cfg.threads,
                        [&](std::size_t j) { return sample_replicate(cfg, mode, n, fine, noise, n_seed, j); });
}

using payoff_fn = std::function<double(double)>;

inline ErrorPoint strong_point(const ExperimentConfig& cfg, std::size_t n, std::span<const ReplicateSample> samples) {
    std::vector<double> e(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) e[j] = samples[j].reference - samples[j].coarse;
    ErrorPoint p;
    p.n = n;
    p.error = root_mean_moment(e, cfg.r);
    p.standard_error = bootstrap_se(
        e.size(),
        [&](std::span<const std::size_t> idx) {
            std::vector<double> r(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) r[i] = e[idx[i]];
            return root_mean_moment(r, cfg.r);
        },
        cfg.bootstrap_resamples, seed_for_n(cfg.seed, n), n);
    return p;
}

inline ErrorPoint weak_point(const ExperimentConfig& cfg, std::size_t n, std::span<const ReplicateSample> samples,
                             const payoff_fn& f) {
    std::vector<double> fc(samples.size());
    std::vector<double> fr(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
        fc[j] = f(samples[j].coarse);
        fr[j] = f(samples[j].reference);
    }
    auto stat = [&](std::span<const std::size_t> idx) {
        compensated_sum a;
        compensated_sum b;
        for (std::size_t i : idx) {
            a.add(fc[i]);
            b.add(fr[i]);
        }
        return std::abs(a.value() - b.value()) / static_cast<double>(idx.size());
    };
    std::vector<std::size_t> all(samples.size());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    ErrorPoint p;
    p.n = n;
    p.error = stat(all);
    p.standard_error = bootstrap_se(samples.size(), stat, cfg.bootstrap_resamples, seed_for_n(cfg.seed, n), n);
    return p;
}

/// Slope of the report's error curve, or NaN when it cannot be fitted
/// (fewer than three points or a zero error).
inline double report_slope(const std::vector<ErrorPoint>& pts) {
    if (pts.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<std::size_t, double>> pairs;
    for (const auto& p : pts) {
        if (!(p.error > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        pairs.emplace_back(p.n, p.error);
    }
    return fit_slope(pairs);
}

namespace detail {

inline ExperimentConfig materialize(ExperimentConfig cfg) {
    if (cfg.n_list.empty()) cfg.n_list = default_n_list(cfg.problem);
    return cfg;
}

inline ErrorReport run_strong(ExperimentConfig cfg, error_mode mode) {
    cfg = materialize(std::move(cfg));
    validate(cfg, mode);
    ErrorReport rep;
    rep.mode = mode;
    for (std::size_t n : cfg.n_list) {
        const auto samples = collect_samples(cfg, mode, n);
        rep.per_n.push_back(strong_point(cfg, n, samples));
    }
    rep.fitted_slope = report_slope(rep.per_n);
    rep.config = std::move(cfg);
    return rep;
}

}  // namespace detail

/// Strong L^r error of X1 against the closed-form integral.
inline ErrorReport strong_error_exact_x1(const ExperimentConfig& cfg) {
    return detail::run_strong(cfg, error_mode::strong_exact);
}

/// Strong L^r error against the exact-information quadrature on the L_ref-times
/// finer mesh of the same trajectories.
inline ErrorReport strong_error_reference(const ExperimentConfig& cfg) {
    return detail::run_strong(cfg, error_mode::strong_reference);
}

/// Closed form when available, dense reference otherwise.
inline ErrorReport strong_error(const ExperimentConfig& cfg) {
    return cfg.problem.kind == integrand_kind::x1_wiener ? strong_error_exact_x1(cfg) : strong_error_reference(cfg);
}

/// |mean f(A_n(X~, W~)) - mean f(A_{L n}(X, W))| over shared bundles.
/// `f` defaults to the put payoff with strike cfg.payoff_strike.
inline ErrorReport weak_error(ExperimentConfig cfg, const payoff_fn& f = {}) {
    cfg = detail::materialize(std::move(cfg));
    validate(cfg, error_mode::weak);
    const double strike = cfg.payoff_strike;
    const payoff_fn fn = f ? f : payoff_fn([strike](double x) { return payoff(x, strike); });
    ErrorReport rep;
    rep.mode = error_mode::weak;
    for (std::size_t n : cfg.n_list) {
        const auto samples = collect_samples(cfg, error_mode::weak, n);
        rep.per_n.push_back(weak_point(cfg, n, samples, fn));
    }
    rep.fitted_slope = report_slope(rep.per_n);
    rep.label = "shared bundles for coarse and reference means";
    rep.config = std::move(cfg);
    return rep;
}

inline constexpr double default_delta_sweep[] = {0.0, 1e-4, 1e-3, 1e-2, 1e-1};

/// Noise-regime experiments:
///   floor   one report per delta (delta1 = delta2 = delta); p_W must be K2-class
///   coupled one report with delta1 = delta2 = n^{-1/2}
///   blowup  one report at the configured delta2 > 0; p_W must not be K2-class
inline std::vector<ErrorReport> noise_regime_sweep(const ExperimentConfig& cfg, regime reg,
                                                   std::span<const double> deltas = default_delta_sweep) {
    const ClassTag& tag = cfg.noise.p_w.class_tag();
    std::vector<ErrorReport> out;
    switch (reg) {
        case regime::floor: {
            if (tag.fam != ClassTag::family::k2) {
                throw config_error("floor regime needs a K2-class W disturbance, got " + tag.to_string());
            }
            if (deltas.empty()) throw config_error("floor regime needs at least one delta");
            for (double d : deltas) {
                if (d < 0.0) throw config_error("precision levels must be non-negative");
                ExperimentConfig c = cfg;
                c.coupling = delta_coupling::none;
                c.noise.delta1 = d;
                c.noise.delta2 = d;
                auto rep = strong_error(c);
                rep.label = "floor delta=" + std::to_string(d);
                out.push_back(std::move(rep));
            }
            break;
        }
        case regime::coupled: {
            ExperimentConfig c = cfg;
            c.coupling = delta_coupling::inv_sqrt_n;
            auto rep = strong_error(c);
            rep.label = "coupled delta=n^-1/2";
            out.push_back(std::move(rep));
            break;
        }
        case regime::blowup: {
            if (tag.fam == ClassTag::family::k2 || tag.fam == ClassTag::family::k1) {
                throw config_error("blowup regime needs a K2bar or K3 W disturbance, got " + tag.to_string());
            }
            if (!(cfg.noise.delta2 > 0.0)) throw config_error("blowup regime needs delta2 > 0");
            ExperimentConfig c = cfg;
            c.coupling = delta_coupling::none;
            auto rep = strong_error(c);
            rep.label = "blowup " + std::string(bound_branch(tag)) + " p_W=" + c.noise.p_w.name();
            out.push_back(std::move(rep));
            break;
        }
    }
    return out;
}

}  // namespace itoquad
