#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ffrsim/pathloss.hpp"
#include "ffrsim/rng.hpp"

using namespace ffrsim;
using pathloss::PathLossParams;
using pathloss::loss;

TEST_SUITE("pathloss") {

TEST_CASE("zero distance has unit attenuation") {
    CHECK(loss(0.0, {0.1, 1.0}) == 1.0);
    CHECK(loss(0.0, {5.0, 2.0}) == 1.0);
}

TEST_CASE("known attenuation values") {
    // exp(-0.01 * 20^1.5) and exp(-1), frozen from an independent evaluation.
    CHECK(loss(20.0, {0.01, 1.5}) == doctest::Approx(0.40884171979780414).epsilon(1e-14));
    CHECK(loss(1.0, {1.0, 1.0}) == doctest::Approx(0.36787944117144232).epsilon(1e-14));
}

TEST_CASE("negative distance is rejected") {
    CHECK_THROWS_AS(loss(-1.0, {0.1, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(loss(std::nan(""), {0.1, 1.0}), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW((PathLossParams{0.1, 1.0}).validate());
    CHECK_THROWS_AS((PathLossParams{0.0, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((PathLossParams{-0.1, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((PathLossParams{0.1, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((PathLossParams{std::nan(""), 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((PathLossParams{0.1, std::nan("")}).validate(), std::invalid_argument);
}

TEST_CASE("strictly decreasing and bounded for random parameters") {
    // Ranges kept clear of exp underflow (alpha * r^beta stays below ~700).
    auto gen = rng::make_stream(99);
    std::uniform_real_distribution<double> ua(0.001, 0.5);
    std::uniform_real_distribution<double> ub(0.2, 2.0);
    std::uniform_real_distribution<double> ur(0.0, 35.0);
    for (int t = 0; t < 200; ++t) {
        const PathLossParams p{ua(gen), ub(gen)};
        double r1 = ur(gen), r2 = ur(gen);
        if (r1 > r2) std::swap(r1, r2);
        const double l1 = loss(r1, p);
        const double l2 = loss(r2, p);
        CHECK(l1 > 0.0);
        CHECK(l1 <= 1.0);
        if (r1 < r2) CHECK(l1 > l2);
    }
}

} // TEST_SUITE
