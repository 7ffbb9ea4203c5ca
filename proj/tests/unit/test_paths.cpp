#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include <itoquad/paths.hpp>
#include <itoquad/quadrature.hpp>

using namespace itoquad;
using Catch::Approx;

namespace {

double sample_mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double sample_var(const std::vector<double>& v) {
    const double m = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

}  // namespace

TEST_CASE("uniform mesh pins both endpoints", "[mesh]") {
    const auto m = Mesh::uniform(0.7, 3);
    REQUIRE(m.steps() == 3);
    CHECK(m[0] == 0.0);
    CHECK(m[3] == 0.7);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m[i + 1] > m[i]);
        CHECK(m[i] == Approx(i * 0.7 / 3).epsilon(1e-15));
    }
    CHECK_THROWS_AS(Mesh::uniform(1.0, 0), domain_error);
    CHECK_THROWS_AS(Mesh::uniform(0.0, 4), domain_error);
    CHECK_THROWS_AS(Mesh::from_points({0.0, 0.5, 0.5, 1.0}), domain_error);
    CHECK_THROWS_AS(Mesh::from_points({0.1, 1.0}), domain_error);
}

TEST_CASE("sample_wiener_fine basic contract", "[paths]") {
    const auto one = sample_wiener_fine(7, 0, stream_tag::wiener, 1, 2.0);
    REQUIRE(one.size() == 2);
    CHECK(one[0] == 0.0);

    const auto a = sample_wiener_fine(42, 3, stream_tag::wiener, 64, 1.0);
    const auto b = sample_wiener_fine(42, 3, stream_tag::wiener, 64, 1.0);
    const auto c = sample_wiener_fine(42, 3, stream_tag::wiener2, 64, 1.0);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.size() == 65);

    CHECK_THROWS_AS(sample_wiener_fine(1, 0, stream_tag::wiener, 0, 1.0), domain_error);
    CHECK_THROWS_AS(sample_wiener_fine(1, 0, stream_tag::wiener, 4, 0.0), domain_error);
    CHECK_THROWS_AS(sample_wiener_fine(1, 0, stream_tag::wiener, 4, -1.0), domain_error);
}

TEST_CASE("Var W(T) = T over 10^4 replicates", "[paths][statistical]") {
    const std::size_t M = 10000;
    std::vector<double> last(M);
    for (std::size_t j = 0; j < M; ++j) last[j] = sample_wiener_fine(2024, j, stream_tag::wiener, 16, 1.0).back();
    CHECK(std::abs(sample_var(last) - 1.0) < 0.05);
    CHECK(std::abs(sample_mean(last)) < 3.0 / std::sqrt(double(M)) * 1.0 + 1e-12);
}

TEST_CASE("W and W2 are independent; disjoint increments uncorrelated", "[paths][statistical]") {
    const std::size_t M = 10000;
    std::vector<double> d1(M), d2(M), w(M), w2(M);
    for (std::size_t j = 0; j < M; ++j) {
        const auto a = sample_wiener_fine(99, j, stream_tag::wiener, 8, 1.0);
        const auto b = sample_wiener_fine(99, j, stream_tag::wiener2, 8, 1.0);
        d1[j] = a[2] - a[1];
        d2[j] = a[6] - a[5];
        w[j] = a.back();
        w2[j] = b.back();
    }
    auto cov_within = [&](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> prod(M);
        const double mx = sample_mean(x), my = sample_mean(y);
        for (std::size_t j = 0; j < M; ++j) prod[j] = (x[j] - mx) * (y[j] - my);
        const double se = std::sqrt(sample_var(prod) / M);
        return std::abs(sample_mean(prod)) <= 3.0 * se;
    };
    CHECK(cov_within(d1, d2));
    CHECK(cov_within(w, w2));
}

TEST_CASE("path-level Ito isometry for n = 4", "[paths][statistical]") {
    // E (sum W(t_i) dW_i)^2 = sum t_i dt_i
    const std::size_t n = 4, M = 100000;
    double oracle = 0.0;
    for (std::size_t i = 0; i < n; ++i) oracle += (double(i) / n) * (1.0 / n);
    REQUIRE(oracle == 0.375);

    std::vector<double> sq(M);
    for (std::size_t j = 0; j < M; ++j) {
        const auto w = sample_wiener_fine(5, j, stream_tag::wiener, n, 1.0);
        std::vector<double> x(w.begin(), w.end() - 1);
        const double a = riemann_maruyama(x, w);
        sq[j] = a * a;
    }
    const double se = std::sqrt(sample_var(sq) / M);
    CHECK(std::abs(sample_mean(sq) - oracle) <= 3.0 * se);
}

TEST_CASE("Poisson arrivals", "[paths]") {
    SECTION("contract") {
        const auto a = sample_poisson_arrivals(3, 1, stream_tag::poisson, 5.0, 1.0);
        CHECK(a == sample_poisson_arrivals(3, 1, stream_tag::poisson, 5.0, 1.0));
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i] >= 0.0);
            CHECK(a[i] <= 1.0);
            if (i > 0) CHECK(a[i] > a[i - 1]);
        }
        CHECK_THROWS_AS(sample_poisson_arrivals(3, 1, stream_tag::poisson, 0.0, 1.0), domain_error);
        CHECK_THROWS_AS(sample_poisson_arrivals(3, 1, stream_tag::poisson, -2.0, 1.0), domain_error);
    }
    SECTION("tiny intensity yields no arrivals") {
        std::size_t total = 0;
        for (std::size_t j = 0; j < 100; ++j) total += sample_poisson_arrivals(1, j, stream_tag::poisson, 1e-12, 1.0).size();
        CHECK(total == 0);
    }
    SECTION("E N(T) = lambda T") {
        const std::size_t M = 10000;
        double sum = 0.0;
        for (std::size_t j = 0; j < M; ++j) sum += sample_poisson_arrivals(11, j, stream_tag::poisson, 5.0, 1.0).size();
        CHECK(std::abs(sum / M - 5.0) < 0.05 * 5.0);
    }
}

TEST_CASE("evaluate_count is right-continuous", "[paths]") {
    const std::vector<double> arr{0.2, 0.7};
    CHECK(evaluate_count(arr, 0.5, 1.0) == 1);
    CHECK(evaluate_count(arr, 0.7, 1.0) == 2);
    CHECK(evaluate_count(arr, 0.0, 1.0) == 0);
    CHECK(evaluate_count({}, 0.9, 1.0) == 0);
    CHECK_THROWS_AS(evaluate_count(arr, 1.5, 1.0), domain_error);
    CHECK_THROWS_AS(evaluate_count(arr, -0.1, 1.0), domain_error);
}

TEST_CASE("bundle invariants and subsampling", "[paths]") {
    const auto fine = make_fine_mesh(1.0, 4);
    const auto b = make_bundle(17, 2, fine);
    REQUIRE(b.w.size() == 5);
    REQUIRE(b.w2.size() == 5);
    CHECK(b.w[0] == 0.0);
    CHECK(b.w2[0] == 0.0);

    CHECK(subsample(b, *fine) == b.w);
    CHECK(subsample(b, *fine, channel::w2) == b.w2);
    const auto half = subsample(b, Mesh::uniform(1.0, 2));
    CHECK(half == std::vector<double>{b.w[0], b.w[2], b.w[4]});

    CHECK_THROWS_AS(subsample(b, Mesh::uniform(1.0, 3)), alignment_error);
    CHECK_THROWS_AS(subsample(b, Mesh::from_points({0.0, 0.3, 1.0})), alignment_error);
    CHECK(subsample(b, Mesh::from_points({0.0, 0.25, 1.0})) == std::vector<double>{b.w[0], b.w[1], b.w[4]});

    const auto again = make_bundle(17, 2, fine);
    CHECK(again.w == b.w);
    CHECK(again.poisson_arrivals == b.poisson_arrivals);

    CHECK_THROWS_AS(make_fine_mesh(1.0, 1000, 999), resource_error);
}

TEST_CASE("coarse and reference meshes read one trajectory", "[paths]") {
    const std::size_t n = 10, l_ref = 1000;
    const auto fine = make_fine_mesh(1.0, n * l_ref);
    const auto b = make_bundle(5, 0, fine, 5.0, {false, false});
    const auto coarse = subsample(b, Mesh::uniform(1.0, n));
    const auto ref = subsample(b, *fine);
    REQUIRE(coarse.size() == 11);
    for (std::size_t i = 0; i <= n; ++i) CHECK(coarse[i] == ref[i * l_ref]);

    // two meshes with a common refinement agree at shared points
    const auto c20 = subsample(b, Mesh::uniform(1.0, 20));
    for (std::size_t i = 0; i <= n; ++i) CHECK(coarse[i] == c20[2 * i]);
}

TEST_CASE("partial channel sets read the same W", "[paths]") {
    const auto fine = make_fine_mesh(1.0, 32);
    const auto full = make_bundle(8, 4, fine);
    const auto lean = make_bundle(8, 4, fine, 5.0, {false, false});
    CHECK(full.w == lean.w);
    CHECK_THROWS_AS(lean.values(channel::w2), contract_error);
    CHECK_THROWS_AS(lean.count_at(0), contract_error);
}
