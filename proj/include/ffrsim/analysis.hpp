#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "ffrsim/pathloss.hpp"

namespace ffrsim::analysis {

// Tolerances for the adaptive quadrature routines.
struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int max_subdivisions = 200;

    void validate() const {
        if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
            throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0 and finite");
        if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol))
            throw std::invalid_argument("QuadratureSpec: abs_tol must be >= 0 and finite");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
};

// Raised when the integrator cannot reach the requested tolerance. Carries the
// best available estimate so callers can degrade gracefully.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

// Joint density of the distances to the nearest and second-nearest point of a
// homogeneous PPP with intensity lambda; zero outside 0 < r1 < r2.
double joint_nearest_pdf(double r1, double r2, double lambda);

// Adaptive integration of f over [a, inf). f must not throw.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                         const QuadratureSpec& spec = {});

// Unconditional edge-user probability: T*L(r2) / (L(r1) + T*L(r2)) averaged
// over the joint nearest-distance density. threshold_T is linear (not dB).
double average_ceu_probability(double threshold_T, const pathloss::PathLossParams& pl, double lambda,
                               const QuadratureSpec& spec = {});

}  // namespace ffrsim::analysis
