#pragma once

#include "risemi/channel.hpp"
#include "risemi/manifold.hpp"
#include "risemi/precoding.hpp"
#include "risemi/sinr.hpp"

#include <vector>

namespace risemi {

enum class Awareness { Aware, Unaware };

struct AoOptions {
    double eta = 1e-3;
    int max_outer_iters = 10;
    Scenario scenario = Scenario::Eif;
    Awareness awareness = Awareness::Aware;

    /// Scenario whose gradient the phase update follows.
    [[nodiscard]] Scenario optimizer_scenario() const {
        return awareness == Awareness::Unaware ? Scenario::Eif : scenario;
    }
};

/// RCG settings used inside the outer loop (20 inner iterations).
RcgOptions default_inner_rcg_options();

/// The cluster whose RIS and precoders are being optimised, plus the
/// interference terms that stay fixed while it is optimised.
struct ClusterProblem {
    const cmat* H = nullptr;
    const std::vector<cvec>* g = nullptr;
    Powers powers;
    double noise_w = 0.0;
    rvec weights;
    /// Per-user e/B/C/D terms; the `a` members are rebuilt every outer
    /// iteration. Empty `users` means no external interference.
    CascadeTerms fixed;
};

struct AoTraceRow {
    int outer_iter = 0;
    int inner_iter = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

struct AoResult {
    PhaseVector theta;
    PrecoderSet precoders;
    CascadeTerms terms;                 // cascade terms at (theta, precoders)
    double objective = 0.0;             // optimizer's own objective, nats
    double initial_objective = 0.0;     // at theta_init with its ZF precoders
    std::vector<double> outer_trace;    // objective after each outer iteration
    std::vector<AoTraceRow> trace;      // every inner iterate
    int outer_iterations = 0;
    int decreases = 0;                  // outer steps that lost more than 1e-8
};

/// Alternates ZF precoding (fixed phases) and RCG phase updates (fixed
/// precoders) until the outer objective changes by at most eta. Returns the
/// best accepted (theta, precoder) pair. Propagates ZfDegenerate.
AoResult alternate_optimize(const ClusterProblem& problem, const AoOptions& opts, const RcgOptions& rcg,
                            const PhaseVector& theta_init);

// ---------------------------------------------------------------------------
// Per-trial evaluation helpers
// ---------------------------------------------------------------------------

/// Everything needed to evaluate one realization under one scenario.
struct LinkContext {
    const ChannelRealization* real = nullptr;
    const rmat* R1 = nullptr;
    const rmat* R2 = nullptr;
    Powers powers;
    double noise_w = 0.0;
    rvec weights1;
    rvec weights2;
    EmiLevels emi;
    double emi_self_factor = 4.0;
};

/// Context from a model's config, with EMI levels supplied by the caller.
LinkContext make_link_context(const ScenarioModel& model, const ChannelRealization& real, EmiLevels emi);

/// Cascade terms for cluster 1 given both RIS phase vectors and both precoder sets.
CascadeTerms cluster1_terms(const LinkContext& ctx, const PhaseVector& theta2, const cmat& U1, const cmat& U2);

/// Baseline: both RISs at the given phases (zero phases by default), ZF in both clusters.
SinrReport evaluate_fixed(const LinkContext& ctx, Scenario s);
SinrReport evaluate_fixed(const LinkContext& ctx, const PhaseVector& theta1, const PhaseVector& theta2,
                          Scenario s);

/// Cluster 2 optimised interference-unaware (EIF objective) with its own ZF.
AoResult optimize_cluster2(const LinkContext& ctx, const AoOptions& opts, const RcgOptions& rcg);

struct OptimizedTrial {
    AoResult cluster1;
    SinrReport report;  // true-scenario SINR at the optimised point
};

/// Cluster-1 AO against frozen cluster-2 phases and precoders; the report
/// always uses opts.scenario, whatever the awareness.
OptimizedTrial optimize_cluster1(const LinkContext& ctx, const PhaseVector& theta2, const cmat& U2,
                                 const AoOptions& opts, const RcgOptions& rcg);

}  // namespace risemi
