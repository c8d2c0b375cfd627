#include "risemi/ao.hpp"

#include <cmath>

namespace risemi {

RcgOptions default_inner_rcg_options() {
    RcgOptions o;
    o.max_iters = 20;
    return o;
}

namespace {

void set_signal_terms(CascadeTerms& terms, const ClusterProblem& pb, const cmat& U) {
    const auto& g = *pb.g;
    for (std::size_t k = 0; k < g.size(); ++k) terms.users[k].a = signal_cascade(g[k], *pb.H, U);
}

}  // namespace

AoResult alternate_optimize(const ClusterProblem& pb, const AoOptions& opts, const RcgOptions& rcg,
                            const PhaseVector& theta_init) {
    if (!pb.H || !pb.g) throw std::invalid_argument("alternate_optimize: channel missing");
    if (!(opts.eta > 0.0)) throw std::invalid_argument("alternate_optimize: eta must be > 0");
    if (opts.max_outer_iters < 1) throw std::invalid_argument("alternate_optimize: max_outer_iters must be >= 1");
    const auto K = static_cast<int>(pb.g->size());
    if (theta_init.size() != pb.H->rows()) throw DimensionError("alternate_optimize: theta length mismatch");

    CascadeTerms terms = pb.fixed;
    if (terms.users.empty()) {
        terms.users.resize(K);
        for (auto& uc : terms.users) uc.e.resize(pb.H->rows(), 0);
    }
    if (terms.num_users() != K) throw DimensionError("alternate_optimize: fixed terms user count mismatch");

    const Scenario scn = opts.optimizer_scenario();
    const rvec weights = pb.weights.size() ? pb.weights : rvec::Ones(K);

    AoResult res;
    PhaseVector theta = theta_init;
    PrecoderSet pre = zf_precoder(*pb.g, theta, *pb.H);
    set_signal_terms(terms, pb, pre.U);
    res.initial_objective = SumRateObjective(scn, terms, pb.powers, pb.noise_w, weights).value(theta.vec());
    if (!std::isfinite(res.initial_objective)) throw std::runtime_error("alternate_optimize: non-finite objective");

    res.theta = theta;
    res.precoders = pre;
    res.terms = terms;
    res.objective = res.initial_objective;

    double prev = res.initial_objective;
    for (int t = 0; t < opts.max_outer_iters; ++t) {
        if (t > 0) {
            pre = zf_precoder(*pb.g, theta, *pb.H);
            set_signal_terms(terms, pb, pre.U);
        }
        const SumRateObjective f(scn, terms, pb.powers, pb.noise_w, weights);
        RcgResult inner = rcg_optimize(f, theta, rcg);
        if (!std::isfinite(inner.objective)) throw std::runtime_error("alternate_optimize: non-finite objective");

        for (const auto& e : inner.trace) res.trace.push_back({t, e.iteration, e.objective, e.grad_norm, e.step});
        theta = inner.theta;
        const double cur = inner.objective;
        res.outer_trace.push_back(cur);
        res.outer_iterations = t + 1;
        if (cur < prev - 1e-8) ++res.decreases;

        if (cur > res.objective) {
            res.objective = cur;
            res.theta = theta;
            res.precoders = pre;
            res.terms = terms;
        }
        if (std::abs(cur - prev) <= opts.eta) break;
        prev = cur;
    }
    return res;
}

LinkContext make_link_context(const ScenarioModel& model, const ChannelRealization& real, EmiLevels emi) {
    const auto& cfg = model.config();
    const auto& geo = model.geometry();
    LinkContext ctx;
    ctx.real = &real;
    ctx.R1 = &model.correlation(0).R;
    ctx.R2 = &model.correlation(1).R;
    ctx.noise_w = geo.noise_power_w;
    ctx.emi = emi;
    ctx.emi_self_factor = cfg.emi_self_factor;
    for (int n = 0; n < 2; ++n) {
        const auto& c = cfg.clusters[n];
        const int K = c.num_users();
        rvec p = rvec::Constant(K, geo.clusters[n].tx_power_w / K);
        rvec w = Eigen::Map<const rvec>(c.user_weights.data(), K);
        if (n == 0) {
            ctx.powers.cluster1 = p;
            ctx.weights1 = w;
        } else {
            ctx.powers.cluster2 = p;
            ctx.weights2 = w;
        }
    }
    return ctx;
}

CascadeTerms cluster1_terms(const LinkContext& ctx, const PhaseVector& theta2, const cmat& U1, const cmat& U2) {
    const auto& real = *ctx.real;
    CascadeInputs in{.H1 = real.H[0], .g1 = real.g[0], .U1 = U1};
    in.H2 = &real.H[1];
    in.U2 = &U2;
    in.Z21 = &real.Z21;
    in.theta2 = &theta2;
    in.R1 = ctx.R1;
    in.R2 = ctx.R2;
    in.emi = ctx.emi;
    in.emi_self_factor = ctx.emi_self_factor;
    return build_cascades(in);
}

SinrReport evaluate_fixed(const LinkContext& ctx, Scenario s) {
    const auto& real = *ctx.real;
    return evaluate_fixed(ctx, PhaseVector::zero(real.H[0].rows()), PhaseVector::zero(real.H[1].rows()), s);
}

SinrReport evaluate_fixed(const LinkContext& ctx, const PhaseVector& theta1, const PhaseVector& theta2,
                          Scenario s) {
    const auto& real = *ctx.real;
    const PrecoderSet p2 = zf_precoder(real.g[1], theta2, real.H[1]);
    const PrecoderSet p1 = zf_precoder(real.g[0], theta1, real.H[0]);
    const CascadeTerms terms = cluster1_terms(ctx, theta2, p1.U, p2.U);
    return sinr(s, terms, theta1, ctx.powers, ctx.noise_w);
}

AoResult optimize_cluster2(const LinkContext& ctx, const AoOptions& opts, const RcgOptions& rcg) {
    const auto& real = *ctx.real;
    ClusterProblem pb;
    pb.H = &real.H[1];
    pb.g = &real.g[1];
    pb.powers.cluster1 = ctx.powers.cluster2;
    pb.noise_w = ctx.noise_w;
    pb.weights = ctx.weights2;

    AoOptions o = opts;
    o.scenario = Scenario::Eif;
    o.awareness = Awareness::Unaware;
    return alternate_optimize(pb, o, rcg, initial_phase(real.H[1].rows(), rcg));
}

OptimizedTrial optimize_cluster1(const LinkContext& ctx, const PhaseVector& theta2, const cmat& U2,
                                 const AoOptions& opts, const RcgOptions& rcg) {
    const auto& real = *ctx.real;
    const cmat U1_placeholder = cmat::Zero(real.H[0].cols(), static_cast<Eigen::Index>(real.g[0].size()));

    ClusterProblem pb;
    pb.H = &real.H[0];
    pb.g = &real.g[0];
    pb.powers = ctx.powers;
    pb.noise_w = ctx.noise_w;
    pb.weights = ctx.weights1;
    pb.fixed = cluster1_terms(ctx, theta2, U1_placeholder, U2);

    OptimizedTrial out;
    out.cluster1 = alternate_optimize(pb, opts, rcg, initial_phase(real.H[0].rows(), rcg));
    out.report = sinr(opts.scenario, out.cluster1.terms, out.cluster1.theta, ctx.powers, ctx.noise_w);
    return out;
}

}  // namespace risemi
