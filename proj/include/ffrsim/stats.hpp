#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "ffrsim/rng.hpp"

namespace ffrsim::stats {

// One-sample Kolmogorov-Smirnov statistic sup|F_n - F| against a continuous CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Asymptotic critical value at significance 0.01: K_0.01 / sqrt(n).
inline double ks_critical_001(std::size_t n) {
    return 1.62762 / std::sqrt(static_cast<double>(n));
}

// z quantile at 0.99 for one-sided chi-square critical values.
inline constexpr double kZ99 = 2.3263478740408408;

// Wilson-Hilferty approximation of the chi-square quantile with df degrees.
inline double chi2_critical(double df, double z = kZ99) {
    const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
    return df * t * t * t;
}

// CDF of the nearest-point distance of a PPP: 1 - exp(-pi*lambda*r^2).
inline double rayleigh_nearest_cdf(double r, double lambda) {
    if (r <= 0.0) return 0.0;
    return 1.0 - std::exp(-std::numbers::pi * lambda * r * r);
}

// Empirical frequency of g1*L1 < T*g2*L2 over n i.i.d. unit-exponential pairs.
inline double classification_mc_frequency(double L1, double L2, double T, std::uint64_t n,
                                          std::mt19937_64& gen) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double g1 = rng::exponential_gain(gen);
        const double g2 = rng::exponential_gain(gen);
        if (g1 * L1 < T * (g2 * L2)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace ffrsim::stats
