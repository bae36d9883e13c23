#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ffrsim/analysis.hpp"

using namespace ffrsim;
using analysis::QuadratureError;
using analysis::QuadratureSpec;

TEST_SUITE("analysis") {

TEST_CASE("joint density: support and frozen value") {
    CHECK(analysis::joint_nearest_pdf(5.0, 3.0, 0.01) == 0.0);
    CHECK(analysis::joint_nearest_pdf(3.0, 3.0, 0.01) == 0.0);
    CHECK(analysis::joint_nearest_pdf(-1.0, 3.0, 0.01) == 0.0);
    CHECK(analysis::joint_nearest_pdf(0.0, 3.0, 0.01) == 0.0);
    // (2 pi 0.01)^2 * 15 * exp(-0.25 pi), frozen from an independent evaluation.
    CHECK(analysis::joint_nearest_pdf(3.0, 5.0, 0.01) ==
          doctest::Approx(0.026999573714542313).epsilon(1e-13));
}

TEST_CASE("joint density integrates to the first-distance marginal") {
    const double lambda = 0.01;
    const double r1 = 5.0;
    const auto inner = analysis::integrate_semi_infinite(
        [&](double r2) { return analysis::joint_nearest_pdf(r1, r2, lambda); }, r1);
    const double marginal =
        2.0 * std::numbers::pi * lambda * r1 * std::exp(-std::numbers::pi * lambda * r1 * r1);
    CHECK(inner.value == doctest::Approx(marginal).epsilon(1e-8));
}

TEST_CASE("joint density normalizes to one") {
    const double lambda = 0.01;
    const auto outer = analysis::integrate_semi_infinite(
        [&](double r1) {
            return analysis::integrate_semi_infinite(
                       [&](double r2) { return analysis::joint_nearest_pdf(r1, r2, lambda); }, r1)
                .value;
        },
        0.0);
    CHECK(std::fabs(outer.value - 1.0) < 1e-6);
}

TEST_CASE("semi-infinite quadrature on known integrals") {
    const auto a = analysis::integrate_semi_infinite(
        [](double x) { return x * std::exp(-x * x); }, 1.0);
    CHECK(a.value == doctest::Approx(0.18393972058572116).epsilon(1e-10)); // exp(-1)/2
    CHECK(a.error_bound < 1e-8);

    const auto b = analysis::integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0);
    CHECK(b.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("non-integrable functions raise with a best estimate attached") {
    CHECK_THROWS_AS(analysis::integrate_semi_infinite(
                        [](double x) { return 1.0 / (1.0 + x); }, 0.0),
                    QuadratureError);
}

TEST_CASE("quadrature spec validation") {
    CHECK_NOTHROW(QuadratureSpec{}.validate());
    QuadratureSpec s;
    s.rel_tol = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.abs_tol = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.max_subdivisions = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("average edge probability matches the closed-form series at beta = 2") {
    // For beta = 2 the double integral reduces to an alternating series
    //   sum_k (-1)^(k+1) T^k / (1 + k*alpha/(pi*lambda)), T < 1;
    // values below were frozen from a high-precision evaluation of it.
    const double lambda = 0.01;
    CHECK(analysis::average_ceu_probability(0.5, {0.10, 2.0}, lambda) ==
          doctest::Approx(0.094191041531724401).epsilon(1e-9));
    CHECK(analysis::average_ceu_probability(0.25, {0.05, 2.0}, lambda) ==
          doctest::Approx(0.083791803416906306).epsilon(1e-9));
    CHECK(analysis::average_ceu_probability(0.9, {0.20, 2.0}, lambda) ==
          doctest::Approx(0.08498709171967022).epsilon(1e-9));
}

TEST_CASE("average edge probability matches an independent quadrature") {
    CHECK(analysis::average_ceu_probability(1.0, {0.12, 1.5}, 0.01) ==
          doctest::Approx(0.286644208801).epsilon(1e-9));
}

TEST_CASE("average edge probability: limits and monotonicity in the threshold") {
    const pathloss::PathLossParams pl{0.1, 1.0};
    const double lambda = 0.01;
    CHECK(analysis::average_ceu_probability(1e-12, pl, lambda) < 1e-9);
    CHECK(analysis::average_ceu_probability(1e12, pl, lambda) > 1.0 - 1e-6);

    double prev = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        const double pe = analysis::average_ceu_probability(t, pl, lambda);
        CHECK(pe > prev);
        CHECK(pe < 1.0);
        prev = pe;
    }
}

} // TEST_SUITE
