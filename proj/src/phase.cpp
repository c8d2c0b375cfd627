#include "risemi/phase.hpp"

namespace risemi {

PhaseVector PhaseVector::from_phases(const rvec& phi) {
    cvec t(phi.size());
    for (Eigen::Index l = 0; l < phi.size(); ++l) t(l) = std::polar(1.0, -phi(l));
    return PhaseVector(std::move(t));
}

PhaseVector PhaseVector::project(const cvec& z) {
    cvec t(z.size());
    for (Eigen::Index l = 0; l < z.size(); ++l) {
        const double m = std::abs(z(l));
        t(l) = m > 0.0 ? z(l) / m : cd(1.0, 0.0);
    }
    return PhaseVector(std::move(t));
}

PhaseVector PhaseVector::from_unit(const cvec& theta, double tol) {
    PhaseVector p(theta);
    if (p.max_modulus_error() > tol) throw std::invalid_argument("phase vector is not unit modulus");
    return p;
}

rvec PhaseVector::phases() const {
    rvec phi(theta_.size());
    for (Eigen::Index l = 0; l < theta_.size(); ++l) phi(l) = -std::arg(theta_(l));
    return phi;
}

cmat PhaseVector::reflection_matrix() const { return theta_.conjugate().asDiagonal(); }

double PhaseVector::max_modulus_error() const {
    if (theta_.size() == 0) return 0.0;
    return (theta_.cwiseAbs().array() - 1.0).abs().maxCoeff();
}

}  // namespace risemi
