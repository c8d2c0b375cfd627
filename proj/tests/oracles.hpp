#pragma once

// Independent reference computations shared by the unit and acceptance
// tests. Nothing here calls the compact cascade forms under test: SINRs are
// evaluated from the physical channel chain with explicit reflection matrices.

#include "risemi/channel.hpp"
#include "risemi/manifold.hpp"
#include "risemi/sinr.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace oracle {

using namespace risemi;

inline cmat random_cmat(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double var = 1.0) {
    std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
    cmat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = {n(rng), n(rng)};
    return m;
}

inline cvec random_cvec(Eigen::Index n, std::mt19937_64& rng, double var = 1.0) {
    return random_cmat(n, 1, rng, var).col(0);
}

inline cvec random_unit(Eigen::Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    cvec t(n);
    for (Eigen::Index l = 0; l < n; ++l) t(l) = std::polar(1.0, u(rng));
    return t;
}

inline cmat unit_columns(cmat m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j).normalize();
    return m;
}

/// Normalised-sinc correlation on a side x side grid with quarter-wavelength pitch.
inline rmat grid_correlation(int side) {
    rmat R(side * side, side * side);
    for (int a = 0; a < side * side; ++a)
        for (int b = 0; b < side * side; ++b) {
            const double dx = (a % side - b % side) * 0.25, dy = (a / side - b / side) * 0.25;
            const double x = 2.0 * std::hypot(dx, dy);
            R(a, b) = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
        }
    return R;
}

/// A random two-cluster instance with O(1) numbers.
struct Instance {
    cmat H1, H2, U1, U2, Z21;
    std::vector<cvec> g1;
    rmat R1, R2;
    cvec theta1, theta2;
    Powers p;
    EmiLevels emi;
    double noise = 0.0;
    double self_factor = 4.0;
};

inline Instance random_instance(int side1, int side2, int K1, int K2, int T, std::mt19937_64& rng) {
    Instance in;
    const int L1 = side1 * side1, L2 = side2 * side2;
    in.H1 = random_cmat(L1, T, rng);
    in.H2 = random_cmat(L2, T, rng);
    in.U1 = unit_columns(random_cmat(T, K1, rng));
    in.U2 = unit_columns(random_cmat(T, K2, rng));
    in.Z21 = random_cmat(L1, L2, rng, 0.05);
    for (int k = 0; k < K1; ++k) in.g1.push_back(random_cvec(L1, rng));
    in.R1 = grid_correlation(side1);
    in.R2 = grid_correlation(side2);
    in.theta1 = random_unit(L1, rng);
    in.theta2 = random_unit(L2, rng);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    in.p.cluster1 = rvec(K1);
    in.p.cluster2 = rvec(K2);
    for (int k = 0; k < K1; ++k) in.p.cluster1(k) = u(rng);
    for (int k = 0; k < K2; ++k) in.p.cluster2(k) = u(rng);
    in.emi = {0.3 * u(rng), 0.3 * u(rng)};
    in.noise = 0.5 * u(rng);
    return in;
}

inline CascadeTerms cascades(const Instance& in) {
    const PhaseVector t2 = PhaseVector::from_unit(in.theta2);
    CascadeInputs ci{.H1 = in.H1, .g1 = in.g1, .U1 = in.U1};
    ci.H2 = &in.H2;
    ci.U2 = &in.U2;
    ci.Z21 = &in.Z21;
    ci.theta2 = &t2;
    ci.R1 = &in.R1;
    ci.R2 = &in.R2;
    ci.emi = in.emi;
    ci.emi_self_factor = in.self_factor;
    return build_cascades(ci);
}

/// SINR of every cluster-1 user from the physical chain
/// y_k = g_k^H Phi1 (H1 x1 + n1 + Z21 Phi2 (H2 x2 + n2)), Phi = diag(conj theta).
inline rvec direct_sinr(Scenario s, const Instance& in, const cvec& theta1) {
    const cmat Phi1 = theta1.conjugate().asDiagonal();
    const cmat Phi2 = in.theta2.conjugate().asDiagonal();
    const bool irr = s == Scenario::Irr || s == Scenario::EmiIrr;
    const int K = static_cast<int>(in.g1.size());
    rvec out(K);
    for (int k = 0; k < K; ++k) {
        const Eigen::RowVectorXcd front = in.g1[k].adjoint() * Phi1;  // g^H Phi1
        double sig = 0.0, den = in.noise;
        for (int i = 0; i < in.U1.cols(); ++i) {
            const double t = in.p.cluster1(i) * std::norm((front * in.H1 * in.U1.col(i))(0));
            (i == k ? sig : den) += t;
        }
        if (irr)
            for (int j = 0; j < in.U2.cols(); ++j)
                den += in.p.cluster2(j) * std::norm((front * in.Z21 * Phi2 * in.H2 * in.U2.col(j))(0));
        const double emi1 = in.emi.cluster1_w * (front * in.R1.cast<cd>() * front.adjoint())(0).real();
        if (s == Scenario::Emi) den += emi1;
        if (s == Scenario::EmiIrr) {
            const Eigen::RowVectorXcd via = front * in.Z21 * Phi2;
            den += in.self_factor * emi1 + in.emi.cluster2_w * (via * in.R2.cast<cd>() * via.adjoint())(0).real();
        }
        out(k) = sig / den;
    }
    return out;
}

/// f(phi) with theta = exp(-j phi); the objective seen as a function of physical phases.
inline double objective_at_phases(const PhaseObjective& f, const rvec& phi) {
    return f.value(PhaseVector::from_phases(phi).vec());
}

/// Central finite differences of f over phi.
inline rvec fd_phase_gradient(const PhaseObjective& f, const rvec& phi, double h = 1e-6) {
    rvec g(phi.size());
    for (Eigen::Index l = 0; l < phi.size(); ++l) {
        rvec p = phi, m = phi;
        p(l) += h;
        m(l) -= h;
        g(l) = (objective_at_phases(f, p) - objective_at_phases(f, m)) / (2.0 * h);
    }
    return g;
}

/// df/dphi_l implied by a Euclidean gradient eg (w.r.t. Re<x,y>) at theta = exp(-j phi):
/// d theta_l / d phi_l = -j theta_l.
inline rvec phase_gradient_from(const cvec& eg, const cvec& theta) {
    rvec g(theta.size());
    for (Eigen::Index l = 0; l < theta.size(); ++l)
        g(l) = (std::conj(eg(l)) * (cd(0.0, -1.0) * theta(l))).real();
    return g;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <class A, class B>
double rel_err_vec(const A& a, const B& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace oracle
