#include "risemi/sinr.hpp"

#include <cmath>

namespace risemi {

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::Eif: return "EIF";
        case Scenario::Emi: return "EMI";
        case Scenario::Irr: return "IRR";
        case Scenario::EmiIrr: return "EMI_IRR";
    }
    return "?";
}

Scenario parse_scenario(std::string_view name) {
    if (name == "EIF") return Scenario::Eif;
    if (name == "EMI") return Scenario::Emi;
    if (name == "IRR") return Scenario::Irr;
    if (name == "EMI_IRR" || name == "EMI+IRR") return Scenario::EmiIrr;
    throw std::invalid_argument("unknown scenario: " + std::string(name));
}

cmat signal_cascade(const cvec& g, const cmat& H, const cmat& U) {
    if (g.size() != H.rows() || H.cols() != U.rows())
        throw DimensionError("signal cascade: g, H and U dimensions disagree");
    cmat a = H * U;
    a.array().colwise() *= g.conjugate().array();
    return a;
}

namespace {

// conj(g) g^T (.) M, i.e. diag(g^*) M diag(g).
cmat sandwich(const cvec& g, const cmat& M) {
    cmat out = M;
    out.array().colwise() *= g.conjugate().array();
    out.array().rowwise() *= g.transpose().array();
    return out;
}

}  // namespace

CascadeTerms build_cascades(const CascadeInputs& in) {
    const Eigen::Index L1 = in.H1.rows();
    const bool have_c2 = in.H2 && in.U2 && in.Z21 && in.theta2;
    if (have_c2) {
        if (in.Z21->rows() != L1 || in.Z21->cols() != in.H2->rows() || in.theta2->size() != in.H2->rows())
            throw DimensionError("build_cascades: cluster-2 dimensions disagree");
        if (in.H2->cols() != in.U2->rows()) throw DimensionError("build_cascades: H2 and U2 disagree");
    }
    if (in.R1 && (in.R1->rows() != L1 || in.R1->cols() != L1))
        throw DimensionError("build_cascades: R1 dimension mismatch");

    // Shared across users: Z21 Theta2 (L1^2 x L2^2) and its products. Z21 maps
    // RIS 2 onto RIS 1, so no adjoint is needed.
    cmat irr_paths;  // Z21 Theta2 H2 U2
    cmat emi2_form;  // Z21 Theta2 A2 sigma2^2 R2 Theta2^H Z21^H
    if (have_c2) {
        cmat M = *in.Z21;
        M.array().rowwise() *= in.theta2->vec().conjugate().transpose().array();
        if (in.U2->cols() > 0) irr_paths = M * (*in.H2 * *in.U2);
        if (in.emi.cluster2_w > 0.0 && in.R2) {
            if (in.R2->rows() != M.cols()) throw DimensionError("build_cascades: R2 dimension mismatch");
            // R2 is real: two real products instead of one complex one.
            cmat MR(M.rows(), M.cols());
            MR.real() = M.real() * *in.R2;
            MR.imag() = M.imag() * *in.R2;
            emi2_form = in.emi.cluster2_w * (MR * M.adjoint());
        }
    }

    CascadeTerms out;
    out.users.reserve(in.g1.size());
    for (const auto& g : in.g1) {
        UserCascade uc;
        uc.a = signal_cascade(g, in.H1, in.U1);
        if (irr_paths.size() > 0) {
            uc.e = irr_paths;
            uc.e.array().colwise() *= g.conjugate().array();
        } else {
            uc.e.resize(L1, 0);
        }
        if (in.emi.cluster1_w > 0.0 && in.R1) {
            uc.B = sandwich(g, in.emi.cluster1_w * in.R1->cast<cd>());
            uc.C = in.emi_self_factor * uc.B;
        }
        if (emi2_form.size() > 0) uc.D = sandwich(g, emi2_form);
        out.users.push_back(std::move(uc));
    }
    return out;
}

CascadeTerms build_cascades(const ChannelRealization& real, const PhaseVector& theta2, const cmat& U1,
                            const cmat& U2, const rmat& R1, const rmat& R2, EmiLevels emi,
                            double emi_self_factor) {
    CascadeInputs in{.H1 = real.H[0], .g1 = real.g[0], .U1 = U1};
    in.H2 = &real.H[1];
    in.U2 = &U2;
    in.Z21 = &real.Z21;
    in.theta2 = &theta2;
    in.R1 = &R1;
    in.R2 = &R2;
    in.emi = emi;
    in.emi_self_factor = emi_self_factor;
    return build_cascades(in);
}

namespace {

double quad_form(const cmat& Q, const cvec& theta) {
    if (Q.size() == 0) return 0.0;
    return theta.dot(Q * theta).real();  // Eigen's dot conjugates the first argument
}

}  // namespace

UserPower user_power(Scenario s, const UserCascade& uc, int k, const cvec& theta, const Powers& p) {
    if (uc.a.rows() != theta.size()) throw DimensionError("SINR: theta length does not match cascade terms");
    if (p.cluster1.size() != uc.a.cols()) throw DimensionError("SINR: cluster-1 power count mismatch");

    UserPower up;
    const cvec v = uc.a.adjoint() * theta;  // conj(theta^H a_i)
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double t = p.cluster1(i) * std::norm(v(i));
        if (i == k) up.signal = t;
        else up.intra += t;
    }

    const bool with_irr = s == Scenario::Irr || s == Scenario::EmiIrr;
    if (with_irr && uc.e.cols() > 0) {
        if (p.cluster2.size() != uc.e.cols()) throw DimensionError("SINR: cluster-2 power count mismatch");
        const cvec w = uc.e.adjoint() * theta;
        for (Eigen::Index j = 0; j < w.size(); ++j) up.irr += p.cluster2(j) * std::norm(w(j));
    }

    if (s == Scenario::Emi) up.quad = quad_form(uc.B, theta);
    else if (s == Scenario::EmiIrr) up.quad = quad_form(uc.C, theta) + quad_form(uc.D, theta);
    return up;
}

double rate_bps_hz(double sinr) { return std::log2(1.0 + sinr); }

SinrReport sinr(Scenario s, const CascadeTerms& terms, const PhaseVector& theta1, const Powers& p,
                double noise_w) {
    SinrReport r;
    r.scenario = s;
    const int K = terms.num_users();
    r.sinr.resize(K);
    r.rate_bps_hz.resize(K);
    for (int k = 0; k < K; ++k) {
        const UserPower up = user_power(s, terms.users[k], k, theta1.vec(), p);
        r.sinr(k) = up.signal / (up.intra + up.irr + up.quad + noise_w);
        r.rate_bps_hz(k) = rate_bps_hz(r.sinr(k));
    }
    r.sum_rate_bps_hz = r.rate_bps_hz.sum();
    return r;
}

SinrReport sinr_eif(const CascadeTerms& t, const PhaseVector& th, const Powers& p, double n) {
    return sinr(Scenario::Eif, t, th, p, n);
}
SinrReport sinr_emi(const CascadeTerms& t, const PhaseVector& th, const Powers& p, double n) {
    return sinr(Scenario::Emi, t, th, p, n);
}
SinrReport sinr_irr(const CascadeTerms& t, const PhaseVector& th, const Powers& p, double n) {
    return sinr(Scenario::Irr, t, th, p, n);
}
SinrReport sinr_emi_irr(const CascadeTerms& t, const PhaseVector& th, const Powers& p, double n) {
    return sinr(Scenario::EmiIrr, t, th, p, n);
}

double sum_rate(const SinrReport& report, const rvec& weights) {
    if (weights.size() == 0) return report.rate_bps_hz.sum();
    if (weights.size() != report.rate_bps_hz.size()) throw DimensionError("sum_rate: weight count mismatch");
    return weights.dot(report.rate_bps_hz);
}

Eigen::VectorXi outage_indicator(const SinrReport& report, double threshold_bps_hz) {
    Eigen::VectorXi out(report.rate_bps_hz.size());
    for (Eigen::Index k = 0; k < out.size(); ++k) out(k) = report.rate_bps_hz(k) < threshold_bps_hz ? 1 : 0;
    return out;
}

}  // namespace risemi
