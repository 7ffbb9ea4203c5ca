#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"

namespace itoquad {

enum class disturbance_kind { one, identity, xt_squared, linear_drift_t, sqrt_abs, x_abs_x_half, custom };

/// Regularity class a disturbance function is declared to belong to.
///   k1       |p(t,y)| <= 1 + |y|
///   k2       C^{1,2}, derivatives bounded by 1 + |y|^s
///   k2bar    C^{1,1}, first derivatives bounded by 1 + |y|^s
///   k3       |p(t,x) - p(z,y)| <= |t-z|^alpha + |x-y|^beta
struct ClassTag {
    enum class family { k1, k2, k2bar, k3 };

    family fam = family::k1;
    double s = 0.0;
    double alpha = 1.0;
    double beta = 1.0;

    static ClassTag k1() { return {family::k1, 0.0, 1.0, 1.0}; }
    static ClassTag k2(double s) { return {family::k2, s, 1.0, 1.0}; }
    static ClassTag k2bar(double s) { return {family::k2bar, s, 1.0, 1.0}; }
    static ClassTag k3(double alpha, double beta) { return {family::k3, 0.0, alpha, beta}; }

    std::string to_string() const {
        auto num = [](double v) {
            std::string out = std::to_string(v);
            out.erase(out.find_last_not_of('0') + 1);
            if (!out.empty() && out.back() == '.') out.pop_back();
            return out;
        };
        switch (fam) {
            case family::k1: return "K1";
            case family::k2: return "K2_s(" + num(s) + ")";
            case family::k2bar: return "K2bar_s(" + num(s) + ")";
            case family::k3: return "K3(" + num(alpha) + "," + num(beta) + ")";
        }
        return "K1";
    }

    friend bool operator==(const ClassTag&, const ClassTag&) = default;
};

/// Noise-term shape of the error bound for a W-disturbance of class `tag`
/// on the equidistant mesh with n steps:
///   k2     delta1 + delta2
///   k2bar  delta1 + delta2 (1 + sqrt(n))
///   k3     delta1 + delta2 n^{1 - min(alpha, beta/2)}
/// Constants are unknown; only the n and delta dependence is meaningful.
inline double noise_term_shape(const ClassTag& tag, std::size_t n, double delta1, double delta2) {
    const double nn = static_cast<double>(n);
    switch (tag.fam) {
        case ClassTag::family::k1:
        case ClassTag::family::k2: return delta1 + delta2;
        case ClassTag::family::k2bar: return delta1 + delta2 * (1.0 + std::sqrt(nn));
        case ClassTag::family::k3: return delta1 + delta2 * std::pow(nn, 1.0 - std::min(tag.alpha, tag.beta / 2.0));
    }
    return delta1 + delta2;
}

/// Name of the error-bound branch that applies to a W-disturbance of this class.
inline std::string_view bound_branch(const ClassTag& tag) {
    switch (tag.fam) {
        case ClassTag::family::k2: return "floor";
        case ClassTag::family::k2bar: return "sqrt-growth";
        case ClassTag::family::k3: return "holder-growth";
        case ClassTag::family::k1: break;
    }
    return "unclassified";
}

class DisturbanceFunction {
public:
    using function_type = std::function<double(double, double)>;

    DisturbanceFunction() : DisturbanceFunction(disturbance_kind::one) {}

    explicit DisturbanceFunction(disturbance_kind kind) : kind_(kind), tag_(default_tag(kind)) {
        if (kind == disturbance_kind::custom) throw config_error("custom disturbance needs a function");
    }

    static DisturbanceFunction custom(function_type fn, ClassTag tag = ClassTag::k1(), std::string name = "custom") {
        DisturbanceFunction d;
        d.kind_ = disturbance_kind::custom;
        d.tag_ = tag;
        d.fn_ = std::move(fn);
        d.name_ = std::move(name);
        return d;
    }

    double operator()(double t, double x) const {
        switch (kind_) {
            case disturbance_kind::one: return 1.0;
            case disturbance_kind::identity: return x;
            case disturbance_kind::xt_squared: return x * t * t;
            case disturbance_kind::linear_drift_t: return t;
            case disturbance_kind::sqrt_abs: return std::sqrt(std::abs(x));
            case disturbance_kind::x_abs_x_half: return x * std::abs(x) / 2.0;
            case disturbance_kind::custom: return fn_(t, x);
        }
        return 0.0;
    }

    disturbance_kind kind() const noexcept { return kind_; }
    const ClassTag& class_tag() const noexcept { return tag_; }

    /// p(t, x) does not depend on x.
    bool is_state_free() const noexcept {
        return kind_ == disturbance_kind::one || kind_ == disturbance_kind::linear_drift_t;
    }

    std::string name() const;

    static ClassTag default_tag(disturbance_kind kind) {
        switch (kind) {
            case disturbance_kind::one: return ClassTag::k2(0.0);
            case disturbance_kind::linear_drift_t: return ClassTag::k2(0.0);
            case disturbance_kind::identity: return ClassTag::k2(1.0);
            case disturbance_kind::xt_squared: return ClassTag::k2(1.0);
            case disturbance_kind::sqrt_abs: return ClassTag::k3(1.0, 0.5);
            case disturbance_kind::x_abs_x_half: return ClassTag::k2bar(1.0);
            case disturbance_kind::custom: return ClassTag::k1();
        }
        return ClassTag::k1();
    }

private:
    disturbance_kind kind_;
    ClassTag tag_;
    function_type fn_;
    std::string name_;
};

inline constexpr std::pair<disturbance_kind, std::string_view> disturbance_names[] = {
    {disturbance_kind::one, "one"},
    {disturbance_kind::identity, "identity"},
    {disturbance_kind::xt_squared, "xt-squared"},
    {disturbance_kind::linear_drift_t, "linear-drift-t"},
    {disturbance_kind::sqrt_abs, "sqrt-abs"},
    {disturbance_kind::x_abs_x_half, "x-abs-x-half"},
};

inline std::string DisturbanceFunction::name() const {
    if (kind_ == disturbance_kind::custom) return name_;
    for (const auto& [k, n] : disturbance_names) {
        if (k == kind_) return std::string(n);
    }
    return "unknown";
}

inline DisturbanceFunction parse_disturbance(std::string_view name) {
    for (const auto& [k, n] : disturbance_names) {
        if (n == name) return DisturbanceFunction(k);
    }
    throw config_error("unknown noise kind '" + std::string(name) + "'");
}

/// Precision levels and disturbance functions for the X and W evaluations.
struct NoiseSpec {
    double delta1 = 0.0;
    double delta2 = 0.0;
    DisturbanceFunction p_x{disturbance_kind::one};
    DisturbanceFunction p_w{disturbance_kind::one};

    bool exact() const noexcept { return delta1 == 0.0 && delta2 == 0.0; }
};

/// x + delta1 * p_X(t, x)
inline double perturb_x(double x, double t, const NoiseSpec& spec) {
    if (spec.delta1 == 0.0) return x;
    return x + spec.delta1 * spec.p_x(t, x);
}

/// w + delta2 * p_W(t, w)
inline double perturb_w(double w, double t, const NoiseSpec& spec) {
    if (spec.delta2 == 0.0) return w;
    return w + spec.delta2 * spec.p_w(t, w);
}

struct GridSample {
    double t;
    double x;
};

/// Spot check of the growth/smoothness conditions behind a class tag on a
/// finite set of samples. Advisory: nothing in the harness depends on it.
inline bool check_growth_bound(const DisturbanceFunction& p, std::span<const GridSample> grid) {
    constexpr double tol = 1e-6;
    if (grid.empty()) throw domain_error("growth check needs at least one sample");
    const ClassTag& tag = p.class_tag();
    auto bound = [&](double x) { return tag.s == 0.0 ? 1.0 : 1.0 + std::pow(std::abs(x), tag.s); };

    switch (tag.fam) {
        case ClassTag::family::k1:
            return std::all_of(grid.begin(), grid.end(),
                               [&](const GridSample& g) { return std::abs(p(g.t, g.x)) <= 1.0 + std::abs(g.x) + tol; });
        case ClassTag::family::k2:
        case ClassTag::family::k2bar: {
            const bool second = tag.fam == ClassTag::family::k2;
            for (const auto& g : grid) {
                const double h = 1e-4 * std::max(1.0, std::abs(g.x));
                const double ht = 1e-5;
                const double dt = (p(g.t + ht, g.x) - p(g.t - ht, g.x)) / (2.0 * ht);
                const double dx = (p(g.t, g.x + h) - p(g.t, g.x - h)) / (2.0 * h);
                double lim = bound(g.x) + tol;
                if (std::abs(dt) > lim || std::abs(dx) > lim) return false;
                if (second) {
                    const double dxx = (p(g.t, g.x + h) - 2.0 * p(g.t, g.x) + p(g.t, g.x - h)) / (h * h);
                    // central second difference carries O(h^2) truncation plus cancellation noise
                    lim += 1e-3 * std::max(1.0, std::abs(p(g.t, g.x)));
                    if (std::abs(dxx) > lim) return false;
                }
            }
            return true;
        }
        case ClassTag::family::k3:
            for (const auto& a : grid) {
                for (const auto& b : grid) {
                    const double lhs = std::abs(p(a.t, a.x) - p(b.t, b.x));
                    const double rhs = std::pow(std::abs(a.t - b.t), tag.alpha) + std::pow(std::abs(a.x - b.x), tag.beta);
                    if (lhs > rhs + tol) return false;
                }
            }
            return true;
    }
    return true;
}

}  // namespace itoquad
