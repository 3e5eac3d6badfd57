#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "saradon/error.hpp"
#include "saradon/splines.hpp"

using namespace saradon;

TEST_CASE("eval_bspline examples") {
    CHECK(eval_bspline(1, 0.5) == 1.0);
    CHECK(eval_bspline(2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    // B_4(2) = (B_2 * B_2)(2), by direct quadrature of the hat product.
    const double conv = oracle::integrate([](double s) { return oracle::hat02(s) * oracle::hat02(2.0 - s); }, 0.0, 2.0, {1.0});
    CHECK(conv == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(eval_bspline(4, 2.0) - conv) < 1e-14);
}

TEST_CASE("eval_bspline half-open support of B_1") {
    CHECK(eval_bspline(1, 0.0) == 0.0);
    CHECK(eval_bspline(1, 1.0) == 1.0);
    CHECK(eval_bspline(1, 1.0000001) == 0.0);
    CHECK(eval_bspline(3, -0.1) == 0.0);
    CHECK(eval_bspline(3, 3.0) == 0.0);
}

TEST_CASE("eval_bspline rejects order 0") {
    try {
        eval_bspline(0, 0.5);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_order);
    }
    CHECK_THROWS_AS(eval_centered(0, 0.0), Error);
}

TEST_CASE("eval_bspline matches the explicit cubic") {
    for (int i = -5; i <= 45; ++i) {
        const double x = 0.1 * i + 0.013;
        CHECK(std::abs(eval_bspline(4, x) - oracle::cubic_b4(x)) < 1e-14);
    }
}

TEST_CASE("eval_centered examples") {
    CHECK(eval_centered(1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_centered(1, 1.0) == 0.0);
    CHECK(eval_centered(1, -1.0) == 0.0);
    CHECK(std::abs(eval_centered(2, 0.5) - eval_bspline(4, 2.5)) < 1e-15);
}

TEST_CASE("eval_box examples") {
    const BoxSplineGenerator g11{1, 1};
    CHECK(eval_box(g11, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_box(g11, 1.0, 0.3) == 0.0);
    const BoxSplineGenerator g12{1, 2};
    CHECK(eval_box(g12, 0.5, 0.5) == doctest::Approx(eval_centered(1, 0.5) * eval_centered(2, 0.5)).epsilon(1e-15));
}

TEST_CASE("box-spline support is exactly [-n1, n1] x [-n2, n2]") {
    for (int n1 = 1; n1 <= 3; ++n1)
        for (int n2 = 1; n2 <= 3; ++n2) {
            const BoxSplineGenerator g{n1, n2};
            CHECK(eval_box(g, 0.0, 0.0) > 0.0);
            CHECK(eval_box(g, n1 + 1e-9, 0.0) == 0.0);
            CHECK(eval_box(g, 0.0, -n2 - 1e-9) == 0.0);
            CHECK(eval_box(g, n1 - 1e-3, n2 - 1e-3) > 0.0);
            const Box s = g.support();
            CHECK(s == Box{-double(n1), double(n1), -double(n2), double(n2)});
        }
}

TEST_CASE("fourier_box examples") {
    const BoxSplineGenerator g{1, 1};
    CHECK(fourier_box(g, 0.0, 0.0) == 1.0);
    CHECK(std::abs(fourier_box(g, 2.0 * std::numbers::pi, 0.7)) < 1e-30);
    CHECK(fourier_box(g, 1.0, 1.0) == doctest::Approx(std::pow(std::sin(0.5) / 0.5, 4)).epsilon(1e-15));
}

TEST_CASE("sinc Taylor branch is continuous at the switch point") {
    for (double u : {1e-4 * (1 - 1e-12), 1e-4 * (1 + 1e-12), 5e-5, 1e-8}) {
        const double direct = std::sin(u) / u;
        CHECK(std::abs(sinc(u) - direct) < 2e-16);
    }
    CHECK(sinc(0.0) == 1.0);
}

TEST_CASE("B_m is nonnegative and integrates to one") {
    for (int m = 1; m <= 8; ++m) {
        std::vector<double> cuts;
        for (int j = 0; j <= m; ++j) cuts.push_back(j);
        const double integral = oracle::integrate([m](double x) { return eval_bspline(m, x); }, 0.0, double(m), cuts);
        CHECK(std::abs(integral - 1.0) < 1e-10);
        for (int i = 0; i <= 200; ++i) CHECK(eval_bspline(m, -0.5 + (m + 1.0) * i / 200.0) >= 0.0);
    }
}

TEST_CASE("centered splines are even") {
    for (int n = 1; n <= 4; ++n)
        for (int i = 0; i <= 100; ++i) {
            const double x = n * i / 100.0;
            CHECK(std::abs(eval_centered(n, x) - eval_centered(n, -x)) <= 1e-14);
        }
}

TEST_CASE("partition of unity") {
    for (int m = 1; m <= 8; ++m)
        for (int i = 0; i < 50; ++i) {
            const double x = i / 50.0;
            double sum = 0.0;
            for (int k = -m - 1; k <= m + 1; ++k) sum += eval_bspline(m, x + k);
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
}

TEST_CASE("fourier_box agrees with 2-D tensor quadrature of the Fourier integral") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-12.0, 12.0);
    std::uniform_int_distribution<int> order(1, 3);
    using G = boost::math::quadrature::gauss<double, 30>;
    for (int trial = 0; trial < 50; ++trial) {
        const BoxSplineGenerator g{order(rng), order(rng)};
        const double xi1 = uni(rng), xi2 = uni(rng);
        // Tensor product of 30-point rules on every unit cell of the support.
        std::complex<double> sum{0.0, 0.0};
        for (int c1 = -g.n1; c1 < g.n1; ++c1)
            for (int c2 = -g.n2; c2 < g.n2; ++c2) {
                const auto& x = G::abscissa();
                const auto& w = G::weights();
                auto node = [&](std::size_t i, int sign) { return sign * x[i]; };
                for (std::size_t i = 0; i < x.size(); ++i)
                    for (int si : {1, -1}) {
                        if (i == 0 && si == -1 && x[0] == 0.0) continue;
                        const double u = c1 + 0.5 + 0.5 * node(i, si);
                        for (std::size_t j = 0; j < x.size(); ++j)
                            for (int sj : {1, -1}) {
                                if (j == 0 && sj == -1 && x[0] == 0.0) continue;
                                const double v = c2 + 0.5 + 0.5 * node(j, sj);
                                const double weight = 0.25 * w[i] * w[j];
                                sum += weight * eval_box(g, u, v) * std::polar(1.0, -(u * xi1 + v * xi2));
                            }
                    }
            }
        CHECK(std::abs(sum - std::complex<double>(fourier_box(g, xi1, xi2), 0.0)) < 1e-8);
    }
}
