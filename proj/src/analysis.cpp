#include "ffrsim/analysis.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace ffrsim::analysis {

namespace {

void disable_gsl_abort() {
    static std::once_flag flag;
    std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

using WorkspacePtr = std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)>;

WorkspacePtr make_workspace(int n) {
    auto* w = gsl_integration_workspace_alloc(static_cast<std::size_t>(n));
    if (w == nullptr) throw std::bad_alloc();
    return WorkspacePtr(w, &gsl_integration_workspace_free);
}

double call_std_function(double x, void* params) {
    return (*static_cast<const std::function<double(double)>*>(params))(x);
}

// Shared state for the nested edge-probability integral. The substitution
// u = pi*lambda*r1^2, s = pi*lambda*(r2^2 - r1^2) reduces the joint density
// to e^{-u-s} on the positive quadrant, so both levels are semi-infinite
// integrals with unit-scale exponential decay regardless of lambda.
struct EdgeProbCtx {
    double T;
    double alpha;
    double beta;
    double pi_lambda;
    const QuadratureSpec* spec;
    gsl_integration_workspace* inner_ws;
    double u = 0.0;
    double r1_pow = 0.0; // r1^beta for the current outer point
    bool inner_failed = false;
    int inner_status = 0;
};

double edge_prob_inner(double s, void* params) {
    const auto* c = static_cast<const EdgeProbCtx*>(params);
    const double r2_pow = std::pow((c->u + s) / c->pi_lambda, 0.5 * c->beta);
    // T*L(r2) / (L(r1) + T*L(r2)) rewritten as T / (e^delta + T) with
    // delta = alpha*(r2^beta - r1^beta) >= 0; exp overflow lands at 0, not NaN.
    const double delta = c->alpha * (r2_pow - c->r1_pow);
    return std::exp(-s) * (c->T / (std::exp(delta) + c->T));
}

double edge_prob_outer(double u, void* params) {
    auto* c = static_cast<EdgeProbCtx*>(params);
    c->u = u;
    c->r1_pow = std::pow(u / c->pi_lambda, 0.5 * c->beta);

    gsl_function inner;
    inner.function = &edge_prob_inner;
    inner.params = params;

    double value = 0.0;
    double err = 0.0;
    const int status = gsl_integration_qagiu(&inner, 0.0, c->spec->abs_tol, c->spec->rel_tol,
                                             static_cast<std::size_t>(c->spec->max_subdivisions),
                                             c->inner_ws, &value, &err);
    if (status != GSL_SUCCESS) {
        c->inner_failed = true;
        c->inner_status = status;
    }
    return std::exp(-u) * value;
}

}  // namespace

double joint_nearest_pdf(double r1, double r2, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("joint_nearest_pdf: lambda must be > 0 and finite");
    if (!(r1 > 0.0) || !(r2 > r1)) return 0.0;
    const double pi_lambda = std::numbers::pi * lambda;
    const double c = 2.0 * pi_lambda;
    return c * c * r1 * r2 * std::exp(-pi_lambda * r2 * r2);
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                         const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a)) throw std::invalid_argument("integrate_semi_infinite: lower bound must be finite");
    disable_gsl_abort();

    gsl_function gf;
    gf.function = &call_std_function;
    gf.params = const_cast<std::function<double(double)>*>(&f);

    auto ws = make_workspace(spec.max_subdivisions);
    double value = 0.0;
    double err = 0.0;
    const int status = gsl_integration_qagiu(&gf, a, spec.abs_tol, spec.rel_tol,
                                             static_cast<std::size_t>(spec.max_subdivisions), ws.get(),
                                             &value, &err);
    if (status != GSL_SUCCESS)
        throw QuadratureError(std::string("integrate_semi_infinite: ") + gsl_strerror(status), value, err);
    return QuadratureResult{value, err};
}

double average_ceu_probability(double threshold_T, const pathloss::PathLossParams& pl, double lambda,
                               const QuadratureSpec& spec) {
    pl.validate();
    spec.validate();
    if (!(threshold_T > 0.0) || !std::isfinite(threshold_T))
        throw std::invalid_argument("average_ceu_probability: threshold_T must be > 0 and finite");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("average_ceu_probability: lambda must be > 0 and finite");
    disable_gsl_abort();

    auto inner_ws = make_workspace(spec.max_subdivisions);
    auto outer_ws = make_workspace(spec.max_subdivisions);

    EdgeProbCtx ctx;
    ctx.T = threshold_T;
    ctx.alpha = pl.alpha;
    ctx.beta = pl.beta;
    ctx.pi_lambda = std::numbers::pi * lambda;
    ctx.spec = &spec;
    ctx.inner_ws = inner_ws.get();

    gsl_function outer;
    outer.function = &edge_prob_outer;
    outer.params = &ctx;

    double value = 0.0;
    double err = 0.0;
    const int status = gsl_integration_qagiu(&outer, 0.0, spec.abs_tol, spec.rel_tol,
                                             static_cast<std::size_t>(spec.max_subdivisions), outer_ws.get(),
                                             &value, &err);
    if (ctx.inner_failed)
        throw QuadratureError(std::string("average_ceu_probability: inner integral: ") + gsl_strerror(ctx.inner_status),
                              value, err);
    if (status != GSL_SUCCESS)
        throw QuadratureError(std::string("average_ceu_probability: ") + gsl_strerror(status), value, err);
    return value;
}

}  // namespace ffrsim::analysis
