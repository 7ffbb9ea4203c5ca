#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "mesh.hpp"

namespace itoquad {

/// Dot-product accumulator: each product is split into its rounded value and
/// exact rounding error (fma), and both streams are summed with Neumaier's
/// compensation. Order of accumulation is strictly left to right.
/// Increments w[i+1] - w[i] are also split exactly (TwoSum), so a constant
/// integrand telescopes to c (w_n - w_0) within a few ulps.
class compensated_sum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    void add_product(double a, double b) noexcept {
        const double p = a * b;
        add(p);
        comp_ += std::fma(a, b, -p);
    }

    /// Adds a * (hi - lo) with the difference split exactly into value and error.
    void add_product_of_difference(double a, double hi, double lo) noexcept {
        const double d = hi - lo;
        const double z = d - hi;
        const double err = (hi - (d - z)) - (lo + z);
        add_product(a, d);
        comp_ += a * err;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Noisy information for one trajectory: X~ at t_0..t_{n-1}, W~ at t_0..t_n.
struct QuadratureInput {
    std::vector<double> x_tilde;
    std::vector<double> w_tilde;
    Mesh mesh;
};

/// sum_{i<n} x[i] * (w[i+1] - w[i])
inline double riemann_maruyama(std::span<const double> x, std::span<const double> w) {
    if (x.empty()) throw contract_error("quadrature needs n >= 1");
    if (w.size() != x.size() + 1) {
        throw contract_error("quadrature expects " + std::to_string(x.size() + 1) + " W values, got " +
                             std::to_string(w.size()));
    }
    compensated_sum acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add_product_of_difference(x[i], w[i + 1], w[i]);
    return acc.value();
}

inline double riemann_maruyama(const QuadratureInput& in) {
    if (in.x_tilde.size() != in.mesh.steps()) {
        throw contract_error("x_tilde has " + std::to_string(in.x_tilde.size()) + " entries for a mesh of " +
                             std::to_string(in.mesh.steps()) + " steps");
    }
    return riemann_maruyama(in.x_tilde, in.w_tilde);
}

/// Noisy evaluations kept in structured form: exact values plus the
/// disturbance values, X~ = x + delta1 p_x and W~ = w + delta2 p_w.
struct StructuredInput {
    std::span<const double> x;
    std::span<const double> p_x;  // may be empty when delta1 == 0
    double delta1 = 0.0;
    std::span<const double> w;
    std::span<const double> p_w;  // may be empty when delta2 == 0
    double delta2 = 0.0;
};

/// Riemann-Maruyama sum over structured noisy information. Each W~ increment
/// enters as (w[i+1]-w[i]) + delta2 (p_w[i+1]-p_w[i]) and X~ as
/// sum x dW~ + delta1 sum p_x dW~. A constant p_w therefore cancels exactly,
/// and an additive X disturbance contributes delta1 (W~(T) - W~(0)) up to rounding.
inline double riemann_maruyama(const StructuredInput& in) {
    const std::size_t n = in.x.size();
    if (n == 0) throw contract_error("quadrature needs n >= 1");
    if (in.w.size() != n + 1) throw contract_error("W must have one more value than X");
    const bool noisy_x = in.delta1 != 0.0;
    const bool noisy_w = in.delta2 != 0.0;
    if (noisy_x && in.p_x.size() != n) throw contract_error("X disturbance length mismatch");
    if (noisy_w && in.p_w.size() != n + 1) throw contract_error("W disturbance length mismatch");

    compensated_sum main;
    compensated_sum extra;
    for (std::size_t i = 0; i < n; ++i) {
        main.add_product_of_difference(in.x[i], in.w[i + 1], in.w[i]);
        if (noisy_x) extra.add_product_of_difference(in.p_x[i], in.w[i + 1], in.w[i]);
        if (noisy_w) {
            const double dp = in.delta2 * (in.p_w[i + 1] - in.p_w[i]);
            if (dp != 0.0) {
                main.add_product(in.x[i], dp);
                if (noisy_x) extra.add_product(in.p_x[i], dp);
            }
        }
    }
    if (!noisy_x) return main.value();
    return main.value() + in.delta1 * extra.value();
}

}  // namespace itoquad
