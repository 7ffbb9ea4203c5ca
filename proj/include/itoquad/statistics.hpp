#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <boost/random/uniform_int_distribution.hpp>

#include "errors.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace itoquad {

inline double mean(std::span<const double> v) {
    if (v.empty()) throw domain_error("mean of an empty sample");
    compensated_sum acc;
    for (double x : v) acc.add(x);
    return acc.value() / static_cast<double>(v.size());
}

/// ((1/M) sum |e_j|^r)^{1/r}
inline double root_mean_moment(std::span<const double> e, double r = 2.0) {
    if (e.empty()) throw domain_error("moment of an empty sample");
    if (!(r >= 1.0)) throw domain_error("moment order must be >= 1");
    compensated_sum acc;
    if (r == 2.0) {
        for (double x : e) acc.add_product(x, x);
    } else {
        for (double x : e) acc.add(std::pow(std::abs(x), r));
    }
    return std::pow(acc.value() / static_cast<double>(e.size()), 1.0 / r);
}

/// Bootstrap standard error of `stat` over index resamples of size `size`.
/// The statistic receives the resampled indices so paired samples stay paired.
inline double bootstrap_se(std::size_t size, const std::function<double(std::span<const std::size_t>)>& stat,
                           std::size_t resamples, std::uint64_t seed, std::uint64_t key) {
    if (size < 2 || resamples < 2) return std::numeric_limits<double>::quiet_NaN();
    auto eng = make_engine(seed, key, stream_tag::bootstrap);
    boost::random::uniform_int_distribution<std::size_t> pick(0, size - 1);
    std::vector<std::size_t> idx(size);
    std::vector<double> values(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        for (auto& i : idx) i = pick(eng);
        values[b] = stat(idx);
    }
    const double m = mean(values);
    compensated_sum acc;
    for (double v : values) acc.add_product(v - m, v - m);
    return std::sqrt(acc.value() / static_cast<double>(resamples - 1));
}

/// Negated least-squares slope of log(error) against log(n): the empirical
/// convergence order.
inline double fit_slope(std::span<const std::pair<std::size_t, double>> pairs) {
    if (pairs.size() < 3) throw domain_error("slope fit needs at least 3 points");
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& [n, err] : pairs) {
        if (n == 0) throw domain_error("slope fit needs positive n");
        if (!(err > 0.0)) throw domain_error("slope fit needs positive errors");
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(err));
    }
    const double mx = mean(lx);
    const double my = mean(ly);
    compensated_sum sxy;
    compensated_sum sxx;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy.add_product(lx[i] - mx, ly[i] - my);
        sxx.add_product(lx[i] - mx, lx[i] - mx);
    }
    if (sxx.value() == 0.0) throw domain_error("slope fit needs at least two distinct n");
    const double slope = -sxy.value() / sxx.value();
    return slope == 0.0 ? 0.0 : slope;
}

}  // namespace itoquad
