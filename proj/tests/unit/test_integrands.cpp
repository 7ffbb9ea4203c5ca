#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <itoquad/integrands.hpp>

using namespace itoquad;

TEST_CASE("closed form of the X1 integral", "[integrands]") {
    CHECK(exact_integral_x1(0.0, 1.0) == -0.5);
    CHECK(exact_integral_x1(2.0, 1.0) == 1.5);
    CHECK(exact_integral_x1(std::sqrt(2.5), 2.5) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("payoff is the put and 1-Lipschitz", "[integrands][property]") {
    CHECK(payoff(2.0, 2.0) == 0.0);
    CHECK(payoff(0.0, 2.0) == 2.0);
    CHECK(payoff(5.0, 2.0) == 0.0);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(gen), b = u(gen), k = std::abs(u(gen));
        REQUIRE(std::abs(payoff(a, k) - payoff(b, k)) <= std::abs(a - b) + 4e-16 * (std::abs(a) + std::abs(b) + k));
    }
}

TEST_CASE("integrand catalogue at hand-built bundles", "[integrands]") {
    TrajectoryBundle b;
    b.fine_mesh = make_fine_mesh(1.0, 4);
    b.w = {0.0, 0.5, 3.0, -1.0, 0.25};
    b.w2 = {0.0, -0.5, 0.75, 1.0, 2.0};
    b.poisson_arrivals = {0.6};
    b.channels = {true, true};

    CHECK(eval_integrand(Integrand::x1(), 0.5, b) == 3.0);
    CHECK(eval_integrand(Integrand::x2(), 0.5, b) == 0.75);

    // S(0) = 1 with K = 9: (9 - 1) * 1
    CHECK(eval_integrand(Integrand::x3(), 0.0, b) == 8.0);
    // W(0.5) = 3: S = exp(-0.25 + 3) > 9, put payoff vanishes
    CHECK(eval_integrand(Integrand::x3(), 0.5, b) == 0.0);
    const double s = std::exp(-0.5 * 0.25 + 0.5);
    CHECK(eval_integrand(Integrand::x3(), 0.25, b) == Catch::Approx((9.0 - s) * s).epsilon(1e-15));

    // before the first arrival N = 0 whatever W is
    CHECK(eval_integrand(Integrand::x4(), 0.5, b) == 0.0);
    CHECK(eval_integrand(Integrand::x4(), 0.75, b) == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));

    CHECK(eval_integrand(Integrand::sde(), 1.0, b) == 2.0);
    CHECK(eval_integrand(Integrand::sde(), 0.25, b) == Catch::Approx(std::exp(3.0 * 0.75) * -0.5).epsilon(1e-15));
    CHECK(eval_integrand(Integrand::constant_value(2.0), 0.75, b) == 2.0);

    CHECK_THROWS_AS(eval_integrand(Integrand::x1(), 0.3, b), alignment_error);
}

TEST_CASE("X3 is bounded by K^2/4 and X4 grows with N", "[integrands][property]") {
    const auto fine = make_fine_mesh(1.0, 256);
    const auto x3 = Integrand::x3();
    for (std::uint64_t j = 0; j < 50; ++j) {
        const auto b = make_bundle(21, j, fine);
        for (std::size_t k = 0; k <= 256; ++k) {
            const double v = eval_at(x3, b, k);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 81.0 / 4.0);
        }
        auto more = b;
        more.poisson_arrivals.insert(more.poisson_arrivals.begin(), 1e-9);
        for (std::size_t k = 0; k <= 256; k += 16) {
            REQUIRE(eval_at(Integrand::x4(), more, k) >= eval_at(Integrand::x4(), b, k));
        }
    }
}

TEST_CASE("integrands read only the past", "[integrands][property]") {
    // Changing the bundle after fine index k must not change X at k.
    const auto fine = make_fine_mesh(1.0, 64);
    const auto b = make_bundle(4, 1, fine);
    for (const auto& x : {Integrand::x1(), Integrand::x2(), Integrand::x3(), Integrand::x4(), Integrand::sde()}) {
        for (std::size_t k = 0; k < 64; k += 7) {
            auto future = b;
            for (std::size_t m = k + 1; m <= 64; ++m) {
                future.w[m] += 1.0;
                future.w2[m] -= 1.0;
            }
            std::erase_if(future.poisson_arrivals, [&](double a) { return a > (*fine)[k]; });
            future.poisson_arrivals.push_back(std::nextafter((*fine)[k + 1], 2.0));
            REQUIRE(eval_at(x, future, k) == eval_at(x, b, k));
        }
    }
}

TEST_CASE("integrand names", "[integrands]") {
    CHECK(parse_integrand_kind("sde") == integrand_kind::sde_kernel);
    CHECK(to_string(integrand_kind::x3_put_weighted) == "x3");
    CHECK_THROWS_AS(parse_integrand_kind("x5"), config_error);
}
