#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <itoquad/statistics.hpp>

using namespace itoquad;

TEST_CASE("fit_slope recovers exact power laws", "[statistics]") {
    using P = std::vector<std::pair<std::size_t, double>>;
    CHECK(fit_slope(P{{4, 3.0 / 2.0}, {16, 3.0 / 4.0}, {64, 3.0 / 8.0}}) == Catch::Approx(0.5).epsilon(1e-13));
    CHECK(fit_slope(P{{4, 0.2}, {16, 0.2}, {64, 0.2}}) == 0.0);
    CHECK(fit_slope(P{{4, 1.0 / 4}, {8, 1.0 / 8}, {16, 1.0 / 16}, {32, 1.0 / 32}}) == Catch::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(fit_slope(P{{4, 1.0}, {16, 0.0}, {64, 1.0}}), domain_error);
    CHECK_THROWS_AS(fit_slope(P{{4, 1.0}, {16, -0.5}, {64, 1.0}}), domain_error);
    CHECK_THROWS_AS(fit_slope(P{{4, 1.0}, {16, 0.5}}), domain_error);
}

TEST_CASE("root_mean_moment", "[statistics]") {
    const std::vector<double> e{3.0, -4.0};
    CHECK(root_mean_moment(e, 2.0) == Catch::Approx(std::sqrt(12.5)).epsilon(1e-15));
    CHECK(root_mean_moment(e, 4.0) == Catch::Approx(std::pow((81.0 + 256.0) / 2.0, 0.25)).epsilon(1e-14));
    CHECK_THROWS_AS(root_mean_moment(std::vector<double>{}, 2.0), domain_error);
}

TEST_CASE("bootstrap standard error of a mean", "[statistics]") {
    std::mt19937_64 gen(8);
    std::normal_distribution<double> g;
    std::vector<double> v(2000);
    for (auto& x : v) x = g(gen);
    auto stat = [&](std::span<const std::size_t> idx) {
        double s = 0.0;
        for (auto i : idx) s += v[i];
        return s / idx.size();
    };
    const double se = bootstrap_se(v.size(), stat, 500, 1, 2);
    CHECK(se == Catch::Approx(1.0 / std::sqrt(2000.0)).epsilon(0.15));
    CHECK(se == bootstrap_se(v.size(), stat, 500, 1, 2));
    CHECK(std::isnan(bootstrap_se(1, stat, 500, 1, 2)));
}
