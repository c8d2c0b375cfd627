#include "risemi/manifold.hpp"

#include <cmath>

namespace risemi {

namespace {

// EMI matrix entering the denominator of user k for scenario s.
cmat scenario_quad(Scenario s, const UserCascade& uc) {
    if (s == Scenario::Emi) return uc.B;
    if (s != Scenario::EmiIrr) return {};
    if (uc.C.size() == 0) return uc.D;
    if (uc.D.size() == 0) return uc.C;
    return uc.C + uc.D;
}

bool uses_irr(Scenario s) { return s == Scenario::Irr || s == Scenario::EmiIrr; }

void check_dims(const CascadeTerms& terms, const cvec& theta, const Powers& p, const rvec& weights) {
    if (weights.size() != terms.num_users()) throw DimensionError("objective: weight count mismatch");
    for (const auto& uc : terms.users) {
        if (uc.a.rows() != theta.size()) throw DimensionError("objective: theta length mismatch");
        if (uc.a.cols() != p.cluster1.size()) throw DimensionError("objective: cluster-1 power count mismatch");
    }
}

struct UserEval {
    double signal = 0.0;
    double interference = 0.0;  // everything in the denominator except noise
};

UserEval evaluate_user(Scenario s, const UserCascade& uc, int k, const cvec& theta, const Powers& p,
                       const cmat& Q) {
    UserEval ev;
    const cvec v = uc.a.adjoint() * theta;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double t = p.cluster1(i) * std::norm(v(i));
        if (i == k) ev.signal = t;
        else ev.interference += t;
    }
    if (uses_irr(s) && uc.e.cols() > 0) {
        const cvec w = uc.e.adjoint() * theta;
        for (Eigen::Index j = 0; j < w.size(); ++j) ev.interference += p.cluster2(j) * std::norm(w(j));
    }
    if (Q.size() > 0) ev.interference += theta.dot(Q * theta).real();
    return ev;
}

double value_impl(Scenario s, const CascadeTerms& terms, const cvec& theta, const Powers& p, double noise_w,
                  const rvec& weights, const std::vector<cmat>& quads) {
    double f = 0.0;
    for (int k = 0; k < terms.num_users(); ++k) {
        const UserEval ev = evaluate_user(s, terms.users[k], k, theta, p, quads[k]);
        f += weights(k) * std::log1p(ev.signal / (ev.interference + noise_w));
    }
    return f;
}

// sum_k w_k [ (2 sum_i p_i a_i a_i^H theta + 2 sum_j q_j e_j e_j^H theta + (Q + Q^H) theta) / total
//            - (same without the i = k term) / interference ]
cvec grad_impl(Scenario s, const CascadeTerms& terms, const cvec& theta, const Powers& p, double noise_w,
               const rvec& weights, const std::vector<cmat>& quads) {
    const Eigen::Index n = theta.size();
    cvec grad = cvec::Zero(n);
    for (int k = 0; k < terms.num_users(); ++k) {
        const UserCascade& uc = terms.users[k];
        const cmat& Q = quads[k];

        const cvec v = uc.a.adjoint() * theta;
        double signal = 0.0, interference = 0.0;
        cvec own = cvec::Zero(n);
        cvec others = cvec::Zero(n);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double pi = p.cluster1(i);
            if (i == k) {
                signal = pi * std::norm(v(i));
                own = (2.0 * pi * v(i)) * uc.a.col(i);
            } else {
                interference += pi * std::norm(v(i));
                others += (2.0 * pi * v(i)) * uc.a.col(i);
            }
        }
        if (uses_irr(s) && uc.e.cols() > 0) {
            const cvec w = uc.e.adjoint() * theta;
            for (Eigen::Index j = 0; j < w.size(); ++j) {
                interference += p.cluster2(j) * std::norm(w(j));
                others += (2.0 * p.cluster2(j) * w(j)) * uc.e.col(j);
            }
        }
        if (Q.size() > 0) {
            const cvec Qt = Q * theta;
            interference += theta.dot(Qt).real();
            others += Qt + Q.adjoint() * theta;
        }

        const double total = signal + interference + noise_w;
        const double denom = interference + noise_w;
        grad += weights(k) * ((own + others) / total - others / denom);
    }
    return grad;
}

std::vector<cmat> quads_for(Scenario s, const CascadeTerms& terms) {
    std::vector<cmat> q;
    q.reserve(terms.users.size());
    for (const auto& uc : terms.users) q.push_back(scenario_quad(s, uc));
    return q;
}

void check_irr_powers(Scenario s, const CascadeTerms& terms, const Powers& p) {
    if (!uses_irr(s)) return;
    for (const auto& uc : terms.users)
        if (uc.e.cols() > 0 && uc.e.cols() != p.cluster2.size())
            throw DimensionError("objective: cluster-2 power count mismatch");
}

}  // namespace

double weighted_sum_rate(Scenario s, const CascadeTerms& terms, const cvec& theta, const Powers& p,
                         double noise_w, const rvec& weights) {
    check_dims(terms, theta, p, weights);
    check_irr_powers(s, terms, p);
    return value_impl(s, terms, theta, p, noise_w, weights, quads_for(s, terms));
}

cvec euclid_grad(Scenario s, const CascadeTerms& terms, const cvec& theta, const Powers& p, double noise_w,
                 const rvec& weights) {
    check_dims(terms, theta, p, weights);
    check_irr_powers(s, terms, p);
    return grad_impl(s, terms, theta, p, noise_w, weights, quads_for(s, terms));
}

cvec euclid_grad_eif(const CascadeTerms& t, const cvec& th, const Powers& p, double n, const rvec& w) {
    return euclid_grad(Scenario::Eif, t, th, p, n, w);
}
cvec euclid_grad_emi(const CascadeTerms& t, const cvec& th, const Powers& p, double n, const rvec& w) {
    return euclid_grad(Scenario::Emi, t, th, p, n, w);
}
cvec euclid_grad_emi_irr(const CascadeTerms& t, const cvec& th, const Powers& p, double n, const rvec& w) {
    return euclid_grad(Scenario::EmiIrr, t, th, p, n, w);
}

SumRateObjective::SumRateObjective(Scenario s, const CascadeTerms& terms, Powers p, double noise_w,
                                   rvec weights)
    : scenario_(s), terms_(terms), powers_(std::move(p)), noise_w_(noise_w), weights_(std::move(weights)) {
    if (weights_.size() == 0) weights_ = rvec::Ones(terms_.num_users());
    check_irr_powers(s, terms_, powers_);
    quad_ = quads_for(s, terms_);
}

double SumRateObjective::value(const cvec& theta) const {
    check_dims(terms_, theta, powers_, weights_);
    return value_impl(scenario_, terms_, theta, powers_, noise_w_, weights_, quad_);
}

cvec SumRateObjective::euclid_grad(const cvec& theta) const {
    check_dims(terms_, theta, powers_, weights_);
    return grad_impl(scenario_, terms_, theta, powers_, noise_w_, weights_, quad_);
}

}  // namespace risemi
