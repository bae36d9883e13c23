#pragma once

#include <cmath>
#include <stdexcept>

namespace ffrsim::pathloss {

// Stretched path loss L(r) = exp(-alpha * r^beta), r in meters.
// alpha: obstacle resistance, beta: obstacle density exponent.
struct PathLossParams {
    double alpha = 0.1;
    double beta = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("PathLossParams: alpha must be > 0 and finite");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("PathLossParams: beta must be > 0 and finite");
    }
};

// Attenuation factor in (0, 1]; 1 at r = 0, strictly decreasing in r.
inline double loss(double r, const PathLossParams& p) {
    if (!(r >= 0.0)) throw std::invalid_argument("loss: r must be >= 0");
    if (r == 0.0) return 1.0;
    return std::exp(-p.alpha * std::pow(r, p.beta));
}

}  // namespace ffrsim::pathloss
