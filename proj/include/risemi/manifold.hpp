#pragma once

#include "risemi/phase.hpp"
#include "risemi/sinr.hpp"
#include "risemi/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace risemi {

// ---------------------------------------------------------------------------
// Weighted sum-rate objective over the RIS-1 phase vector
// ---------------------------------------------------------------------------

/// sum_k w_k ln(1 + sinr_k). Natural log; divide by ln 2 for bits/s/Hz.
double weighted_sum_rate(Scenario s, const CascadeTerms& terms, const cvec& theta, const Powers& p,
                         double noise_w, const rvec& weights);

/// Euclidean gradient of weighted_sum_rate with respect to the real inner
/// product Re{x^H y}, i.e. 2 * df/d(conj theta). The scenario decides which
/// denominator terms take part.
cvec euclid_grad(Scenario s, const CascadeTerms& terms, const cvec& theta, const Powers& p, double noise_w,
                 const rvec& weights);

cvec euclid_grad_eif(const CascadeTerms& terms, const cvec& theta, const Powers& p, double noise_w,
                     const rvec& weights);
cvec euclid_grad_emi(const CascadeTerms& terms, const cvec& theta, const Powers& p, double noise_w,
                     const rvec& weights);
cvec euclid_grad_emi_irr(const CascadeTerms& terms, const cvec& theta, const Powers& p, double noise_w,
                         const rvec& weights);

/// Smooth function on the complex circle manifold.
class PhaseObjective {
public:
    virtual ~PhaseObjective() = default;
    [[nodiscard]] virtual double value(const cvec& theta) const = 0;
    [[nodiscard]] virtual cvec euclid_grad(const cvec& theta) const = 0;
};

/// weighted_sum_rate for one scenario, with the per-user EMI matrices summed
/// once up front.
class SumRateObjective final : public PhaseObjective {
public:
    SumRateObjective(Scenario s, const CascadeTerms& terms, Powers p, double noise_w, rvec weights);

    [[nodiscard]] double value(const cvec& theta) const override;
    [[nodiscard]] cvec euclid_grad(const cvec& theta) const override;
    [[nodiscard]] Scenario scenario() const { return scenario_; }

private:
    Scenario scenario_;
    const CascadeTerms& terms_;
    Powers powers_;
    double noise_w_;
    rvec weights_;
    std::vector<cmat> quad_;  // per user; empty when the scenario has no EMI term
};

// ---------------------------------------------------------------------------
// Complex circle manifold geometry
// ---------------------------------------------------------------------------

/// Real inner product Re{x^H y}.
double inner(const cvec& x, const cvec& y);

/// Tangent-space projection of a Euclidean gradient at theta.
cvec riemannian_grad(const cvec& egrad, const cvec& theta);

/// Polak-Ribiere coefficient (real part). Returns 0 when the previous
/// gradient vanishes.
double polak_ribiere(const cvec& rgrad_now, const cvec& rgrad_prev);

/// Moves a previous search direction into the tangent space at theta_new.
cvec vector_transport(const cvec& d_prev, const cvec& theta_new);

/// theta_l <- (theta_l + step d_l) / |theta_l + step d_l|. A zero-magnitude
/// entry halves the step and retries.
cvec retract(const cvec& theta, double step, const cvec& d);

/// Largest of the tangent-space residuals |Re{x_l conj(theta_l)}|.
double tangency_residual(const cvec& x, const cvec& theta);

struct ArmijoOptions {
    double initial_step = 1.0;
    double contraction = 0.5;
    double sufficient_increase = 1e-4;
    int max_backtracks = 50;
};

struct ArmijoResult {
    double step = 0.0;  // 0 signals stagnation
    cvec theta;         // accepted point (input theta on stagnation)
    double value = 0.0;
    int backtracks = 0;
    bool stagnated = false;
    bool direction_reset = false;  // d was not an ascent direction; rgrad used instead
};

/// Backtracking search for f(retract(theta, t, d)) >= f(theta) + c t Re<rgrad, d>.
ArmijoResult armijo_search(const PhaseObjective& f, const cvec& theta, double f_theta, const cvec& d,
                           const cvec& rgrad, const ArmijoOptions& opts = {});

// ---------------------------------------------------------------------------
// Riemannian conjugate gradient
// ---------------------------------------------------------------------------

enum class InitMode { ZeroPhase, Random, Given };

/// Snapshot handed to RcgOptions::on_iteration after each accepted update.
struct RcgIterate {
    int iteration = 0;
    const cvec* theta = nullptr;      // new point
    const cvec* rgrad = nullptr;      // gradient at the previous point
    const cvec* direction = nullptr;  // direction used for the step
    const cvec* theta_prev = nullptr;
    double objective = 0.0;
    double step = 0.0;
};

struct RcgOptions {
    double epsilon = 1e-4;
    int max_iters = 200;
    ArmijoOptions armijo{};
    InitMode init = InitMode::ZeroPhase;
    std::optional<cvec> given_init;  // used when init == Given
    std::uint64_t init_seed = 0;     // used when init == Random
    std::function<void(const RcgIterate&)> on_iteration;
};

/// Starting point per opts.init.
PhaseVector initial_phase(Eigen::Index n, const RcgOptions& opts);

struct RcgTraceEntry {
    int iteration = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

struct RcgResult {
    PhaseVector theta;
    double objective = 0.0;
    std::vector<RcgTraceEntry> trace;  // entry 0 is the starting point
    int iterations = 0;
    bool converged = false;  // |change| <= epsilon
    bool stagnated = false;  // line search found no ascent
};

RcgResult rcg_optimize(const PhaseObjective& f, const PhaseVector& theta_init, const RcgOptions& opts = {});

}  // namespace risemi
