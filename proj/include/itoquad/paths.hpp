#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "errors.hpp"
#include "mesh.hpp"
#include "rng.hpp"

namespace itoquad {

/// Upper bound on fine-grid steps a single bundle may allocate.
inline constexpr std::size_t default_fine_step_cap = std::size_t{1} << 24;

/// Brownian path on the uniform grid with n_fine steps over [0, T]: W[0] = 0,
/// independent N(0, T/n_fine) increments. Deterministic in every argument.
inline std::vector<double> sample_wiener_fine(std::uint64_t seed, std::uint64_t replicate, stream_tag tag,
                                              std::size_t n_fine, double horizon) {
    if (n_fine == 0) throw domain_error("n_fine must be at least 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw domain_error("horizon must be positive");
    auto eng = make_engine(seed, replicate, tag);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(horizon / static_cast<double>(n_fine));
    std::vector<double> w(n_fine + 1);
    w[0] = 0.0;
    for (std::size_t k = 0; k < n_fine; ++k) w[k + 1] = w[k] + sd * normal(eng);
    return w;
}

/// Arrival times of a rate-`intensity` Poisson process on [0, T], built from
/// cumulative exponential gaps.
inline std::vector<double> sample_poisson_arrivals(std::uint64_t seed, std::uint64_t replicate, stream_tag tag,
                                                   double intensity, double horizon) {
    if (!(intensity > 0.0) || !std::isfinite(intensity)) throw domain_error("Poisson intensity must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw domain_error("horizon must be positive");
    auto eng = make_engine(seed, replicate, tag);
    boost::random::exponential_distribution<double> gap(intensity);
    std::vector<double> arrivals;
    double t = gap(eng);
    while (t <= horizon) {
        arrivals.push_back(t);
        t += gap(eng);
    }
    return arrivals;
}

/// N(t): number of arrivals <= t.
inline std::size_t evaluate_count(std::span<const double> arrivals, double t, double horizon) {
    if (!(t >= 0.0 && t <= horizon)) throw domain_error("counting time outside [0, T]");
    return static_cast<std::size_t>(std::upper_bound(arrivals.begin(), arrivals.end(), t) - arrivals.begin());
}

enum class channel { w, w2 };

/// Which processes a bundle materializes. W is always present.
struct channel_set {
    bool w2 = true;
    bool poisson = true;
};

/// One realization of every driver process on the fine grid. Immutable once
/// built; coarse meshes read it through subsample().
struct TrajectoryBundle {
    std::shared_ptr<const Mesh> fine_mesh;
    std::vector<double> w;
    std::vector<double> w2;
    std::vector<double> poisson_arrivals;
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
    double intensity = 0.0;
    channel_set channels;

    double horizon() const noexcept { return fine_mesh->horizon(); }
    std::size_t fine_steps() const noexcept { return fine_mesh->steps(); }

    const std::vector<double>& values(channel c) const {
        if (c == channel::w2 && !channels.w2) throw contract_error("bundle was built without the W2 channel");
        return c == channel::w ? w : w2;
    }

    std::size_t count_at(std::size_t fine_index) const {
        if (!channels.poisson) throw contract_error("bundle was built without the Poisson channel");
        return evaluate_count(poisson_arrivals, (*fine_mesh)[fine_index], horizon());
    }
};

inline std::shared_ptr<const Mesh> make_fine_mesh(double horizon, std::size_t n_fine,
                                                  std::size_t cap = default_fine_step_cap) {
    if (n_fine > cap) {
        throw resource_error("fine grid of " + std::to_string(n_fine) + " steps exceeds the cap of " +
                             std::to_string(cap));
    }
    return std::make_shared<const Mesh>(Mesh::uniform(horizon, n_fine));
}

/// Builds the bundle for (seed, replicate) on a uniform fine mesh.
inline TrajectoryBundle make_bundle(std::uint64_t seed, std::uint64_t replicate, std::shared_ptr<const Mesh> fine_mesh,
                                    double intensity = 5.0, channel_set channels = {}) {
    if (!fine_mesh || !fine_mesh->is_uniform()) throw contract_error("bundle needs a uniform fine mesh");
    TrajectoryBundle b;
    const double horizon = fine_mesh->horizon();
    const std::size_t n_fine = fine_mesh->steps();
    b.w = sample_wiener_fine(seed, replicate, stream_tag::wiener, n_fine, horizon);
    if (channels.w2) b.w2 = sample_wiener_fine(seed, replicate, stream_tag::wiener2, n_fine, horizon);
    if (channels.poisson) b.poisson_arrivals = sample_poisson_arrivals(seed, replicate, stream_tag::poisson, intensity, horizon);
    b.fine_mesh = std::move(fine_mesh);
    b.seed = seed;
    b.replicate = replicate;
    b.intensity = intensity;
    b.channels = channels;
    return b;
}

/// Values of channel `c` at the points of `mesh`, which must refine into the fine grid.
inline std::vector<double> subsample(const TrajectoryBundle& bundle, const Mesh& mesh, channel c = channel::w) {
    const auto& src = bundle.values(c);
    const auto idx = align_to(*bundle.fine_mesh, mesh);
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = src[idx[i]];
    return out;
}

}  // namespace itoquad
