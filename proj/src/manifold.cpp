#include "risemi/manifold.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace risemi {

double inner(const cvec& x, const cvec& y) { return x.dot(y).real(); }

cvec riemannian_grad(const cvec& egrad, const cvec& theta) {
    if (egrad.size() != theta.size()) throw DimensionError("riemannian_grad: size mismatch");
    const rvec radial = (egrad.array() * theta.array().conjugate()).real();
    return egrad - (radial.cast<cd>().array() * theta.array()).matrix();
}

double polak_ribiere(const cvec& rgrad_now, const cvec& rgrad_prev) {
    const double prev_sq = rgrad_prev.squaredNorm();
    if (prev_sq == 0.0) return 0.0;
    return rgrad_now.dot(rgrad_now - rgrad_prev).real() / prev_sq;
}

cvec vector_transport(const cvec& d_prev, const cvec& theta_new) { return riemannian_grad(d_prev, theta_new); }

cvec retract(const cvec& theta, double step, const cvec& d) {
    if (theta.size() != d.size()) throw DimensionError("retract: size mismatch");
    for (int attempt = 0; attempt < 64; ++attempt, step *= 0.5) {
        cvec z = theta + step * d;
        bool degenerate = false;
        for (Eigen::Index l = 0; l < z.size(); ++l) {
            const double m = std::abs(z(l));
            if (m == 0.0) {
                degenerate = true;
                break;
            }
            z(l) /= m;
        }
        if (!degenerate) return z;
    }
    throw std::runtime_error("retract: degenerate step");
}

double tangency_residual(const cvec& x, const cvec& theta) {
    if (x.size() == 0) return 0.0;
    return (x.array() * theta.array().conjugate()).real().abs().maxCoeff();
}

ArmijoResult armijo_search(const PhaseObjective& f, const cvec& theta, double f_theta, const cvec& d,
                           const cvec& rgrad, const ArmijoOptions& opts) {
    ArmijoResult res;
    res.theta = theta;
    res.value = f_theta;

    const cvec* dir = &d;
    double slope = inner(rgrad, d);
    if (!(slope > 0.0)) {
        dir = &rgrad;
        slope = rgrad.squaredNorm();
        res.direction_reset = true;
    }
    if (!(slope > 0.0)) {
        res.stagnated = true;
        return res;
    }

    double step = opts.initial_step;
    for (int m = 0; m <= opts.max_backtracks; ++m, step *= opts.contraction) {
        cvec cand = retract(theta, step, *dir);
        const double fc = f.value(cand);
        if (!std::isfinite(fc)) throw std::runtime_error("armijo: non-finite objective");
        if (fc >= f_theta + opts.sufficient_increase * step * slope) {
            res.step = step;
            res.theta = std::move(cand);
            res.value = fc;
            res.backtracks = m;
            return res;
        }
    }
    res.backtracks = opts.max_backtracks;
    res.stagnated = true;
    return res;
}

PhaseVector initial_phase(Eigen::Index n, const RcgOptions& opts) {
    switch (opts.init) {
        case InitMode::ZeroPhase: return PhaseVector::zero(n);
        case InitMode::Given:
            if (!opts.given_init || opts.given_init->size() != n)
                throw std::invalid_argument("initial_phase: given init missing or wrong length");
            return PhaseVector::project(*opts.given_init);
        case InitMode::Random: {
            std::mt19937_64 rng(opts.init_seed);
            std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
            rvec phi(n);
            for (Eigen::Index l = 0; l < n; ++l) phi(l) = u(rng);
            return PhaseVector::from_phases(phi);
        }
    }
    return PhaseVector::zero(n);
}

RcgResult rcg_optimize(const PhaseObjective& f, const PhaseVector& theta_init, const RcgOptions& opts) {
    if (!(opts.epsilon > 0.0)) throw std::invalid_argument("rcg: epsilon must be > 0");
    if (!(opts.armijo.contraction > 0.0 && opts.armijo.contraction < 1.0))
        throw std::invalid_argument("rcg: contraction must be in (0,1)");
    if (!(opts.armijo.sufficient_increase > 0.0 && opts.armijo.sufficient_increase < 1.0))
        throw std::invalid_argument("rcg: sufficient increase must be in (0,1)");

    cvec theta = theta_init.vec();
    double obj = f.value(theta);
    if (!std::isfinite(obj)) throw std::runtime_error("rcg: non-finite objective at start");

    RcgResult res;
    cvec rgrad = riemannian_grad(f.euclid_grad(theta), theta);
    res.trace.push_back({0, obj, rgrad.norm(), 0.0});

    cvec rgrad_prev, d_prev;
    for (int r = 0; r < opts.max_iters; ++r) {
        cvec d;
        if (r == 0) {
            d = rgrad;
        } else {
            // Negative coefficients restart with steepest ascent.
            const double tau1 = std::max(0.0, polak_ribiere(rgrad, rgrad_prev));
            d = rgrad + tau1 * vector_transport(d_prev, theta);
        }

        const ArmijoResult ls = armijo_search(f, theta, obj, d, rgrad, opts.armijo);
        if (ls.direction_reset) d = rgrad;
        if (ls.stagnated) {
            res.stagnated = true;
            break;
        }

        const cvec theta_prev = std::move(theta);
        theta = ls.theta;
        const double change = ls.value - obj;
        obj = ls.value;
        res.iterations = r + 1;

        rgrad_prev = std::move(rgrad);
        d_prev = std::move(d);
        rgrad = riemannian_grad(f.euclid_grad(theta), theta);
        res.trace.push_back({r + 1, obj, rgrad.norm(), ls.step});

        if (opts.on_iteration) {
            RcgIterate it;
            it.iteration = r + 1;
            it.theta = &theta;
            it.theta_prev = &theta_prev;
            it.rgrad = &rgrad_prev;
            it.direction = &d_prev;
            it.objective = obj;
            it.step = ls.step;
            opts.on_iteration(it);
        }

        if (std::abs(change) <= opts.epsilon) {
            res.converged = true;
            break;
        }
    }

    res.theta = PhaseVector::project(theta);
    res.objective = f.value(res.theta.vec());
    return res;
}

}  // namespace risemi
