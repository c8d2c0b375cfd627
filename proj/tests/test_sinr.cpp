#include "risemi/precoding.hpp"
#include "risemi/sinr.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace risemi;

TEST_SUITE("sinr") {

TEST_CASE("cascade basics") {
    const cvec ones = cvec::Ones(3);
    const cmat H = cmat::Ones(3, 1);
    const cmat U = cmat::Ones(1, 1);
    CHECK(signal_cascade(ones, H, U).isApprox(cmat::Ones(3, 1)));

    std::mt19937_64 rng(5);
    auto in = oracle::random_instance(2, 2, 2, 2, 2, rng);
    in.emi.cluster1_w = 0.0;
    const auto off = oracle::cascades(in);
    CHECK(off.users[0].B.size() == 0);

    in.emi.cluster1_w = 0.7;
    const auto on = oracle::cascades(in);
    CHECK(on.users[0].C.isApprox(4.0 * on.users[0].B, 1e-15));
    CHECK(on.users[1].B.isApprox(on.users[1].B.adjoint(), 1e-14));
    CHECK(on.users[1].D.isApprox(on.users[1].D.adjoint(), 1e-12));
}

TEST_CASE("scalar SINR") {
    CascadeTerms t;
    t.users.resize(1);
    t.users[0].a = cmat::Ones(1, 1);
    t.users[0].e.resize(1, 0);
    Powers p{rvec::Ones(1), rvec()};
    const auto r = sinr_eif(t, PhaseVector::zero(1), p, 1.0);
    CHECK(r.sinr(0) == 1.0);
    CHECK(r.rate_bps_hz(0) == 1.0);
}

TEST_CASE("ZF nulls intra-cluster interference") {
    std::mt19937_64 rng(9);
    auto in = oracle::random_instance(3, 2, 2, 2, 2, rng);
    const PhaseVector th = PhaseVector::from_unit(in.theta1);
    in.U1 = zf_precoder(in.g1, th, in.H1).U;
    const auto terms = oracle::cascades(in);
    for (int k = 0; k < 2; ++k) {
        const auto up = user_power(Scenario::Eif, terms.users[k], k, in.theta1, in.p);
        CHECK(up.intra <= 1e-20 * up.signal);
        const auto r = sinr_eif(terms, th, in.p, in.noise);
        CHECK(r.sinr(k) == doctest::Approx(up.signal / in.noise).epsilon(1e-12));
    }
}

TEST_CASE("noise-limited power homogeneity") {
    // Single user under ZF: no intra-cluster term, so gamma is linear in p.
    std::mt19937_64 rng(2);
    auto in = oracle::random_instance(2, 2, 1, 2, 2, rng);
    const PhaseVector th = PhaseVector::from_unit(in.theta1);
    in.U1 = zf_precoder(in.g1, th, in.H1).U;
    const auto terms = oracle::cascades(in);
    const auto r1 = sinr_eif(terms, th, in.p, 1e-12);
    Powers p3 = in.p;
    p3.cluster1 *= 3.0;
    const auto r3 = sinr_eif(terms, th, p3, 1e-12);
    CHECK(r3.sinr(0) / r1.sinr(0) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("compact forms match the physical chain") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const auto in = oracle::random_instance(2 + rep % 2, 2 + (rep / 2) % 2, 2, 2, 3, rng);
        const auto terms = oracle::cascades(in);
        const PhaseVector th = PhaseVector::from_unit(in.theta1);
        for (Scenario s : {Scenario::Eif, Scenario::Emi, Scenario::Irr, Scenario::EmiIrr}) {
            const rvec direct = oracle::direct_sinr(s, in, in.theta1);
            const rvec compact = sinr(s, terms, th, in.p, in.noise).sinr;
            CHECK(oracle::rel_err_vec(compact, direct) < 1e-10);
        }
    }
}

TEST_CASE("reductions to EIF are exact") {
    std::mt19937_64 rng(4);
    auto in = oracle::random_instance(2, 2, 2, 2, 2, rng);
    const PhaseVector th = PhaseVector::from_unit(in.theta1);
    const rvec eif = sinr_eif(oracle::cascades(in), th, in.p, in.noise).sinr;

    auto z = in;
    z.emi = {};
    CHECK(sinr_emi(oracle::cascades(z), th, z.p, z.noise).sinr == eif);
    z.Z21.setZero();
    CHECK(sinr_irr(oracle::cascades(z), th, z.p, z.noise).sinr == eif);
    CHECK(sinr_emi_irr(oracle::cascades(z), th, z.p, z.noise).sinr == eif);

    // Empty cluster 2.
    auto e = in;
    e.U2.resize(2, 0);
    e.p.cluster2.resize(0);
    CHECK(sinr_irr(oracle::cascades(e), th, e.p, e.noise).sinr == eif);
}

TEST_CASE("joint EMI+IRR carries three extra B terms") {
    std::mt19937_64 rng(8);
    auto in = oracle::random_instance(2, 2, 2, 2, 2, rng);
    in.emi.cluster2_w = 0.0;
    in.Z21.setZero();
    const auto terms = oracle::cascades(in);
    for (int k = 0; k < 2; ++k) {
        const auto emi = user_power(Scenario::Emi, terms.users[k], k, in.theta1, in.p);
        const auto both = user_power(Scenario::EmiIrr, terms.users[k], k, in.theta1, in.p);
        const double bq = in.theta1.dot(terms.users[k].B * in.theta1).real();
        CHECK(both.quad - emi.quad == doctest::Approx(3.0 * bq).epsilon(1e-12));
    }
}

TEST_CASE("interference only lowers SINR") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        auto in = oracle::random_instance(2, 2, 2, 2, 2, rng);
        const PhaseVector th = PhaseVector::from_unit(in.theta1);
        const auto terms = oracle::cascades(in);
        const rvec eif = sinr_eif(terms, th, in.p, in.noise).sinr;
        const rvec irr = sinr_irr(terms, th, in.p, in.noise).sinr;
        const rvec both = sinr_emi_irr(terms, th, in.p, in.noise).sinr;
        CHECK((both.array() <= irr.array()).all());
        CHECK((irr.array() <= eif.array()).all());

        auto louder = in;
        louder.emi.cluster1_w *= 2.0;
        const rvec emi = sinr_emi(terms, th, in.p, in.noise).sinr;
        const rvec emi2 = sinr_emi(oracle::cascades(louder), th, in.p, in.noise).sinr;
        CHECK((emi2.array() < emi.array()).all());
    }
}

TEST_CASE("rates and outage") {
    CHECK(rate_bps_hz(1.0) == 1.0);
    CHECK(rate_bps_hz(0.0) == 0.0);
    SinrReport r;
    r.sinr = rvec::Zero(2);
    r.rate_bps_hz = rvec(2);
    r.rate_bps_hz << 0.0, 0.1;
    const auto o = outage_indicator(r, 0.1);
    CHECK(o(0) == 1);
    CHECK(o(1) == 0);  // strict inequality
    rvec w(2);
    w << 2.0, 3.0;
    CHECK(sum_rate(r, w) == doctest::Approx(0.3));
    CHECK_THROWS_AS(sum_rate(r, rvec::Ones(3)), DimensionError);
}

TEST_CASE("scenario names") {
    CHECK(parse_scenario("EMI+IRR") == Scenario::EmiIrr);
    CHECK(parse_scenario("EMI_IRR") == Scenario::EmiIrr);
    CHECK(to_string(Scenario::Irr) == "IRR");
    CHECK_THROWS_AS(parse_scenario("nope"), std::invalid_argument);
}

}  // TEST_SUITE
