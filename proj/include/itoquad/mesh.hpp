#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace itoquad {

/// Discretization 0 = t_0 < t_1 < ... < t_n = T of the horizon.
class Mesh {
public:
    /// Equidistant mesh t_i = i*T/n; the last point is pinned to T.
    static Mesh uniform(double horizon, std::size_t steps) {
        if (steps == 0) throw domain_error("mesh needs at least one step");
        if (!(horizon > 0.0) || !std::isfinite(horizon)) throw domain_error("mesh horizon must be positive");
        std::vector<double> pts(steps + 1);
        const double n = static_cast<double>(steps);
        for (std::size_t i = 0; i <= steps; ++i) pts[i] = static_cast<double>(i) * horizon / n;
        pts.back() = horizon;
        return Mesh(std::move(pts), true);
    }

    /// Arbitrary mesh; validates t_0 = 0 and strict monotonicity.
    static Mesh from_points(std::vector<double> pts) {
        if (pts.size() < 2) throw domain_error("mesh needs at least one step");
        if (pts.front() != 0.0) throw domain_error("mesh must start at t = 0");
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (!(pts[i] > pts[i - 1])) throw domain_error("mesh points must be strictly increasing");
        }
        if (!std::isfinite(pts.back())) throw domain_error("mesh horizon must be finite");
        return Mesh(std::move(pts), false);
    }

    double horizon() const noexcept { return points_.back(); }
    std::size_t steps() const noexcept { return points_.size() - 1; }
    const std::vector<double>& points() const noexcept { return points_; }
    double operator[](std::size_t i) const noexcept { return points_[i]; }
    double step(std::size_t i) const noexcept { return points_[i + 1] - points_[i]; }
    bool is_uniform() const noexcept { return uniform_; }

    friend bool operator==(const Mesh& a, const Mesh& b) { return a.points_ == b.points_; }

private:
    Mesh(std::vector<double> pts, bool uniform) : points_(std::move(pts)), uniform_(uniform) {}

    std::vector<double> points_;
    bool uniform_;
};

namespace detail {

inline bool within_one_rounding(double a, double b) {
    if (a == b) return true;
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= scale * std::numeric_limits<double>::epsilon();
}

}  // namespace detail

/// Fine-grid index of every point of `coarse`. Throws alignment_error when a
/// coarse point is not a fine point (within one rounding unit).
inline std::vector<std::size_t> align_to(const Mesh& fine, const Mesh& coarse) {
    std::vector<std::size_t> idx(coarse.points().size());
    const auto& fp = fine.points();
    if (fine.is_uniform() && coarse.is_uniform() && fine.steps() % coarse.steps() == 0 &&
        fine.horizon() == coarse.horizon()) {
        const std::size_t k = fine.steps() / coarse.steps();
        for (std::size_t i = 0; i < idx.size(); ++i) {
            idx[i] = i * k;
            if (!detail::within_one_rounding(fp[idx[i]], coarse[i])) {
                throw alignment_error("mesh point " + std::to_string(coarse[i]) + " is not on the fine grid");
            }
        }
        return idx;
    }
    std::size_t j = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double t = coarse[i];
        while (j < fp.size() && fp[j] < t && !detail::within_one_rounding(fp[j], t)) ++j;
        if (j == fp.size() || !detail::within_one_rounding(fp[j], t)) {
            throw alignment_error("mesh point " + std::to_string(t) + " is not on the fine grid");
        }
        idx[i] = j;
    }
    return idx;
}

/// Fine-grid index of a single time t, or alignment_error.
inline std::size_t locate(const Mesh& fine, double t) {
    const auto& fp = fine.points();
    if (fine.is_uniform()) {
        const double pos = t / fine.horizon() * static_cast<double>(fine.steps());
        const double r = std::round(pos);
        if (r >= 0.0 && r <= static_cast<double>(fine.steps())) {
            const auto k = static_cast<std::size_t>(r);
            if (detail::within_one_rounding(fp[k], t)) return k;
        }
        throw alignment_error("time " + std::to_string(t) + " is not on the fine grid");
    }
    auto it = std::lower_bound(fp.begin(), fp.end(), t);
    if (it != fp.end() && detail::within_one_rounding(*it, t)) return static_cast<std::size_t>(it - fp.begin());
    if (it != fp.begin() && detail::within_one_rounding(*(it - 1), t)) return static_cast<std::size_t>(it - fp.begin() - 1);
    throw alignment_error("time " + std::to_string(t) + " is not on the fine grid");
}

}  // namespace itoquad
