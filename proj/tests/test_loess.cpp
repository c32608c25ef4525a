#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "leadtime/errors.hpp"
#include "leadtime/loess.hpp"
#include "leadtime/rng.hpp"

using namespace leadtime;

namespace {

std::vector<double> iota_xs(int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = i;
    return xs;
}

} // namespace

TEST_CASE("polynomials up to the fit degree are reproduced exactly") {
    const auto xs = iota_xs(25);
    std::vector<double> constant(25, 3.25), linear(25), quadratic(25);
    for (int i = 0; i < 25; ++i) {
        linear[static_cast<std::size_t>(i)] = 2.0 * i - 7.0;
        quadratic[static_cast<std::size_t>(i)] = 0.5 * i * i - 3.0 * i + 1.0;
    }
    for (int span : {7, 13, 25}) {
        const auto c = loess_smooth(xs, constant, span, 0);
        const auto l = loess_smooth(xs, linear, span, 1);
        const auto q = loess_smooth(xs, quadratic, span, 2);
        for (int i = 0; i < 25; ++i) {
            const auto u = static_cast<std::size_t>(i);
            CHECK(c[u] == doctest::Approx(3.25).epsilon(1e-12));
            CHECK(l[u] == doctest::Approx(linear[u]).epsilon(1e-10));
            CHECK(q[u] == doctest::Approx(quadratic[u]).epsilon(1e-8));
        }
    }
}

TEST_CASE("evaluation works off the grid and outside it") {
    const auto xs = iota_xs(10);
    std::vector<double> linear(10);
    for (int i = 0; i < 10; ++i) linear[static_cast<std::size_t>(i)] = 4.0 - i;
    CHECK(loess_fit_at(xs, linear, 5, 1, nullptr, 3.5) ==
          doctest::Approx(0.5).epsilon(1e-10));
    // extension beyond the observed range, as the seasonal extension needs
    CHECK(loess_fit_at(xs, linear, 5, 1, nullptr, -1.0) ==
          doctest::Approx(5.0).epsilon(1e-10));
    CHECK(loess_fit_at(xs, linear, 5, 1, nullptr, 10.0) ==
          doctest::Approx(-6.0).epsilon(1e-10));
}

TEST_CASE("a span larger than the series still fits") {
    const auto xs = iota_xs(5);
    const std::vector<double> ys{1, 1, 1, 1, 1};
    for (double v : loess_smooth(xs, ys, 19, 1)) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero external weight removes a corrupted point") {
    const auto xs = iota_xs(9);
    std::vector<double> ys(9), weights(9, 1.0);
    for (int i = 0; i < 9; ++i) ys[static_cast<std::size_t>(i)] = 3.0 * i;
    ys[4] = 1000.0;
    weights[4] = 0.0;
    const auto fit = loess_smooth(xs, ys, 5, 1, &weights);
    for (int i = 0; i < 9; ++i) {
        CHECK(fit[static_cast<std::size_t>(i)] ==
              doctest::Approx(3.0 * i).epsilon(1e-9));
    }
}

TEST_CASE("all-zero weights fall back to an unweighted fit") {
    const auto xs = iota_xs(7);
    std::vector<double> ys(7), weights(7, 0.0);
    for (int i = 0; i < 7; ++i) ys[static_cast<std::size_t>(i)] = 2.0 + i;
    LoessDiagnostics diag;
    const auto fit = loess_smooth(xs, ys, 7, 1, &weights, &diag);
    CHECK(diag.zero_weight_fallbacks == 7);
    for (int i = 0; i < 7; ++i) {
        CHECK(fit[static_cast<std::size_t>(i)] ==
              doctest::Approx(2.0 + i).epsilon(1e-10));
    }
}

TEST_CASE("smoothing shrinks noise around a constant level") {
    SplitMix64 rng(77);
    const int n = 60;
    const auto xs = iota_xs(n);
    std::vector<double> ys(n);
    double raw_sq = 0;
    for (int i = 0; i < n; ++i) {
        const double noise = 0.5 * sample_normal(rng);
        ys[static_cast<std::size_t>(i)] = 10.0 + noise;
        raw_sq += noise * noise;
    }
    const auto fit = loess_smooth(xs, ys, 21, 1);
    double fit_sq = 0;
    for (int i = 0; i < n; ++i) {
        const double r = fit[static_cast<std::size_t>(i)] - 10.0;
        fit_sq += r * r;
    }
    CHECK(fit_sq < raw_sq * 0.5);
}

TEST_CASE("single point and invalid input") {
    CHECK(loess_fit_at({5.0}, {42.0}, 3, 1, nullptr, 5.0) == doctest::Approx(42.0));
    CHECK_THROWS_AS(loess_smooth({}, {}, 3, 1), InputError);
    CHECK_THROWS_AS(loess_smooth({0, 1}, {1}, 3, 1), InputError);
    CHECK_THROWS_AS(loess_smooth({0, 0}, {1, 1}, 3, 1), InputError);
    CHECK_THROWS_AS(loess_smooth({0, 1}, {1, 1}, 0, 1), InputError);
    CHECK_THROWS_AS(loess_smooth({0, 1}, {1, 1}, 3, 3), InputError);
}
