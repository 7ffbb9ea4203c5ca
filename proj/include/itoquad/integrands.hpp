#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "paths.hpp"

namespace itoquad {

enum class integrand_kind {
    x1_wiener,        // W(t)
    x2_indep_wiener,  // W2(t)
    x3_put_weighted,  // max(0, K - S(t)) S(t),  S(t) = S0 exp(-sigma^2 t / 2 + sigma W(t))
    x4_poisson_exp,   // N(t) exp(W(t))
    sde_kernel,       // exp(mu (T - t)) W2(t)
    constant,         // c
};

/// Put payoff max(0, K - x).
inline double payoff(double x, double strike) { return std::max(0.0, strike - x); }

/// Closed form of the Ito integral of W against itself: W(T)^2/2 - T/2.
inline double exact_integral_x1(double w_T, double horizon) { return 0.5 * w_T * w_T - 0.5 * horizon; }

struct Integrand {
    integrand_kind kind = integrand_kind::x1_wiener;
    double strike = 9.0;     // K
    double sigma = 1.0;
    double s0 = 1.0;
    double intensity = 5.0;  // lambda
    double mu = 3.0;
    double value = 0.0;      // constant integrand

    static Integrand x1() { return {}; }
    static Integrand x2() { return with(integrand_kind::x2_indep_wiener); }
    static Integrand x3(double strike = 9.0, double sigma = 1.0, double s0 = 1.0) {
        Integrand i = with(integrand_kind::x3_put_weighted);
        i.strike = strike;
        i.sigma = sigma;
        i.s0 = s0;
        return i;
    }
    static Integrand x4(double intensity = 5.0) {
        Integrand i = with(integrand_kind::x4_poisson_exp);
        i.intensity = intensity;
        return i;
    }
    static Integrand sde(double mu = 3.0) {
        Integrand i = with(integrand_kind::sde_kernel);
        i.mu = mu;
        return i;
    }
    static Integrand constant_value(double c) {
        Integrand i = with(integrand_kind::constant);
        i.value = c;
        return i;
    }

    /// Channels a bundle must carry to evaluate this integrand.
    channel_set channels() const noexcept {
        return {kind == integrand_kind::x2_indep_wiener || kind == integrand_kind::sde_kernel,
                kind == integrand_kind::x4_poisson_exp};
    }

    friend bool operator==(const Integrand&, const Integrand&) = default;

private:
    static Integrand with(integrand_kind k) {
        Integrand i;
        i.kind = k;
        return i;
    }
};

/// X(t_k) at fine index k of the bundle. Reads only bundle values at times <= t_k.
inline double eval_at(const Integrand& x, const TrajectoryBundle& b, std::size_t k) {
    const double t = (*b.fine_mesh)[k];
    switch (x.kind) {
        case integrand_kind::x1_wiener: return b.w[k];
        case integrand_kind::x2_indep_wiener: return b.values(channel::w2)[k];
        case integrand_kind::x3_put_weighted: {
            const double s = x.s0 * std::exp(-0.5 * x.sigma * x.sigma * t + x.sigma * b.w[k]);
            return payoff(s, x.strike) * s;
        }
        case integrand_kind::x4_poisson_exp: {
            const auto n = b.count_at(k);
            return n == 0 ? 0.0 : static_cast<double>(n) * std::exp(b.w[k]);
        }
        case integrand_kind::sde_kernel: return std::exp(x.mu * (b.horizon() - t)) * b.values(channel::w2)[k];
        case integrand_kind::constant: return x.value;
    }
    return 0.0;
}

/// X(t) for a time t on the bundle's fine grid; alignment_error otherwise.
inline double eval_integrand(const Integrand& x, double t, const TrajectoryBundle& b) {
    return eval_at(x, b, locate(*b.fine_mesh, t));
}

inline constexpr std::pair<integrand_kind, std::string_view> integrand_names[] = {
    {integrand_kind::x1_wiener, "x1"},
    {integrand_kind::x2_indep_wiener, "x2"},
    {integrand_kind::x3_put_weighted, "x3"},
    {integrand_kind::x4_poisson_exp, "x4"},
    {integrand_kind::sde_kernel, "sde"},
    {integrand_kind::constant, "const"},
};

inline std::string to_string(integrand_kind k) {
    for (const auto& [kind, name] : integrand_names) {
        if (kind == k) return std::string(name);
    }
    return "unknown";
}

inline integrand_kind parse_integrand_kind(std::string_view name) {
    for (const auto& [kind, n] : integrand_names) {
        if (n == name) return kind;
    }
    throw config_error("unknown problem '" + std::string(name) + "' (expected x1|x2|x3|x4|sde|const)");
}

}  // namespace itoquad
