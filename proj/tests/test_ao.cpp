#include "risemi/ao.hpp"
#include "risemi/experiment.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace risemi;

namespace {

SystemConfig small_config(int side1 = 4, int side2 = 4) {
    auto cfg = default_config();
    cfg.clusters[0].ris_side = side1;
    cfg.clusters[1].ris_side = side2;
    return validate_config(cfg);
}

}  // namespace

TEST_SUITE("ao") {

TEST_CASE("one outer iteration when eta is huge") {
    const ScenarioModel model(small_config());
    const auto real = draw_realization(model, 0);
    const auto ctx = make_link_context(model, real, {});
    AoOptions o;
    o.eta = 1e9;
    const auto r = optimize_cluster2(ctx, o, default_inner_rcg_options());
    CHECK(r.outer_iterations == 1);
    CHECK(r.outer_trace.size() == 1);
    o.eta = -1.0;
    CHECK_THROWS_AS(optimize_cluster2(ctx, o, default_inner_rcg_options()), std::invalid_argument);
}

TEST_CASE("single user, two elements: AO matches the joint grid optimum") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const cmat H = oracle::random_cmat(2, 2, rng);
        const std::vector<cvec> g{oracle::random_cvec(2, rng)};
        const double p = 1.5, noise = 0.4;

        ClusterProblem pb;
        pb.H = &H;
        pb.g = &g;
        pb.powers.cluster1 = rvec::Constant(1, p);
        pb.noise_w = noise;
        pb.weights = rvec::Ones(1);
        AoOptions o;
        o.scenario = Scenario::Eif;
        const auto r = alternate_optimize(pb, o, default_inner_rcg_options(), PhaseVector::zero(2));

        // For K = 1 the normalised ZF precoder is matched filtering, so the
        // best rate for a phase pair is ln(1 + p ||g^H Phi H||^2 / noise).
        double best = -1.0;
        for (int a = 0; a < 360; ++a)
            for (int b = 0; b < 360; ++b) {
                rvec phi(2);
                phi << a * std::numbers::pi / 180.0, b * std::numbers::pi / 180.0;
                const double gain = effective_channel(g, PhaseVector::from_phases(phi), H).squaredNorm();
                best = std::max(best, std::log1p(p * gain / noise));
            }
        CHECK(r.objective == doctest::Approx(best).epsilon(1e-3));
        CHECK(r.objective >= best - 1e-3);
    }
}

TEST_CASE("fixed evaluation reduces to EIF and is deterministic") {
    const ScenarioModel model(small_config());
    const auto real = draw_realization(model, 2);
    const auto quiet = make_link_context(model, real, {});
    auto zeroed = real;
    zeroed.Z21.setZero();
    const auto ctx0 = make_link_context(model, zeroed, {});
    const auto eif = evaluate_fixed(quiet, Scenario::Eif);
    CHECK(evaluate_fixed(ctx0, Scenario::EmiIrr).sinr == evaluate_fixed(ctx0, Scenario::Eif).sinr);
    CHECK(evaluate_fixed(ctx0, Scenario::Eif).sinr == eif.sinr);
    CHECK(evaluate_fixed(quiet, Scenario::Emi).sinr == eif.sinr);

    const auto again = draw_realization(model, 2);
    const auto ctx2 = make_link_context(model, again, {dbm_to_watts(-65), dbm_to_watts(-65)});
    const auto ctx3 = make_link_context(model, real, {dbm_to_watts(-65), dbm_to_watts(-65)});
    CHECK(evaluate_fixed(ctx2, Scenario::EmiIrr).sinr == evaluate_fixed(ctx3, Scenario::EmiIrr).sinr);
}

TEST_CASE("AO dominates its own starting point and never loses more than 1e-8 per step") {
    const ScenarioModel model(small_config(5, 4));
    const EmiLevels emi{dbm_to_watts(-65), dbm_to_watts(-65)};
    for (std::uint64_t t = 0; t < 6; ++t) {
        const auto real = draw_realization(model, t);
        const auto ctx = make_link_context(model, real, emi);
        const auto c2 = optimize_cluster2(ctx, {}, default_inner_rcg_options());
        for (Scenario s : {Scenario::Eif, Scenario::Emi, Scenario::Irr, Scenario::EmiIrr}) {
            AoOptions o;
            o.scenario = s;
            const auto opt = optimize_cluster1(ctx, c2.theta, c2.precoders.U, o, default_inner_rcg_options());
            CHECK(opt.cluster1.objective >= opt.cluster1.initial_objective);

            // Baseline with the same frozen cluster-2 state: zero phases and their ZF precoders.
            const auto zero = PhaseVector::zero(real.H[0].rows());
            const auto p1 = zf_precoder(real.g[0], zero, real.H[0]);
            const auto terms = cluster1_terms(ctx, c2.theta, p1.U, c2.precoders.U);
            const auto base = sinr(s, terms, zero, ctx.powers, ctx.noise_w);
            CHECK(sum_rate(opt.report) >= sum_rate(base) - 1e-9);

            double best = opt.cluster1.initial_objective;
            for (double v : opt.cluster1.outer_trace) best = std::max(best, v);
            CHECK(opt.cluster1.objective == best);
        }
    }
}

TEST_CASE("unaware optimisation follows the EIF gradient") {
    AoOptions o;
    o.scenario = Scenario::EmiIrr;
    o.awareness = Awareness::Unaware;
    CHECK(o.optimizer_scenario() == Scenario::Eif);
    o.awareness = Awareness::Aware;
    CHECK(o.optimizer_scenario() == Scenario::EmiIrr);
}

}  // TEST_SUITE
