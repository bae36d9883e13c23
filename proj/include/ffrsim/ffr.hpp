#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace ffrsim::ffr {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

enum class UserClass : std::uint8_t { CCU, CEU };

// Classification threshold T and coverage-relevant power levels.
// T is stored linear; convert from dB once at the configuration boundary.
struct FfrConfig {
    double threshold_T = 1.0;    // linear power ratio
    double power_ratio_a = 10.0; // CEU/CCU transmit-power ratio
    double base_power_P = 1.0;   // watts; cancels in SIR
    int subbands_N = 10;

    static FfrConfig from_db(double threshold_T_db, double power_ratio_a = 10.0,
                             double base_power_P = 1.0, int subbands_N = 10) {
        return FfrConfig{db_to_linear(threshold_T_db), power_ratio_a, base_power_P, subbands_N};
    }

    void validate() const {
        if (!(threshold_T > 0.0) || !std::isfinite(threshold_T))
            throw std::invalid_argument("FfrConfig: threshold_T must be > 0 (linear)");
        if (!(power_ratio_a > 0.0) || !std::isfinite(power_ratio_a))
            throw std::invalid_argument("FfrConfig: power_ratio_a must be > 0");
        if (!(base_power_P > 0.0) || !std::isfinite(base_power_P))
            throw std::invalid_argument("FfrConfig: base_power_P must be > 0");
        if (subbands_N < 1) throw std::invalid_argument("FfrConfig: subbands_N must be >= 1");
    }
};

// CEU iff g1*L1 < T * g2*L2; boundary equality stays CCU.
inline UserClass classify(double g1, double g2, double L1, double L2, double T) {
    if (!(g1 > 0.0) || !(g2 > 0.0))
        throw std::invalid_argument("classify: gains must be > 0");
    if (!(L1 > 0.0) || !(L2 > 0.0) || L1 > 1.0 || L2 > 1.0)
        throw std::invalid_argument("classify: attenuations must be in (0, 1]");
    if (!(T > 0.0)) throw std::invalid_argument("classify: threshold must be > 0");
    return (g1 * L1 < T * (g2 * L2)) ? UserClass::CEU : UserClass::CCU;
}

// P(CEU | L1, L2) for i.i.d. unit-mean exponential gains: T*L2 / (L1 + T*L2).
inline double ceu_prob_conditional(double L1, double L2, double T) {
    if (!(L1 > 0.0) || !(L2 > 0.0) || L1 > 1.0 || L2 > 1.0)
        throw std::invalid_argument("ceu_prob_conditional: attenuations must be in (0, 1]");
    if (!(T > 0.0)) throw std::invalid_argument("ceu_prob_conditional: threshold must be > 0");
    return T * L2 / (L1 + T * L2);
}

inline double tx_power(UserClass c, const FfrConfig& cfg) {
    return c == UserClass::CEU ? cfg.power_ratio_a * cfg.base_power_P : cfg.base_power_P;
}

// Transmit-level densities {lambda_c, lambda_e}; conserves lambda exactly.
inline std::pair<double, double> split_densities(double lambda, double p_e) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("split_densities: lambda must be >= 0");
    if (!(p_e >= 0.0 && p_e <= 1.0))
        throw std::invalid_argument("split_densities: p_e must be in [0, 1]");
    const double lambda_e = lambda * p_e;
    return {lambda - lambda_e, lambda_e};
}

// Average transmit power P*(p_c + a*p_e) of the BS serving the typical user.
inline double average_power(const FfrConfig& cfg, double p_c, double p_e) {
    if (std::fabs(p_c + p_e - 1.0) > 1e-12)
        throw std::invalid_argument("average_power: p_c + p_e must sum to 1");
    return cfg.base_power_P * (p_c + cfg.power_ratio_a * p_e);
}

}  // namespace ffrsim::ffr
