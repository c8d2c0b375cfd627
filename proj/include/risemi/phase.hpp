#pragma once

#include "risemi/types.hpp"

namespace risemi {

/// Unit-modulus RIS phase vector.
///
/// Stores the optimisation variable theta in the compact convention where the
/// cascaded gain is theta^H a; the RIS reflection matrix is diag(conj(theta)),
/// i.e. theta_l = exp(-j phi_l) for element phase phi_l.
class PhaseVector {
public:
    PhaseVector() = default;

    /// All phases zero (all-ones vector).
    static PhaseVector zero(Eigen::Index n) { return PhaseVector(cvec::Ones(n)); }

    /// From element phase shifts phi (radians).
    static PhaseVector from_phases(const rvec& phi);

    /// Entrywise normalisation of an arbitrary vector; zero entries map to 1.
    static PhaseVector project(const cvec& z);

    /// Wraps an already unit-modulus vector; throws if any |theta_l| deviates from 1 by more than tol.
    static PhaseVector from_unit(const cvec& theta, double tol = 1e-9);

    [[nodiscard]] const cvec& vec() const { return theta_; }
    [[nodiscard]] Eigen::Index size() const { return theta_.size(); }

    /// Element phase shifts phi in (-pi, pi].
    [[nodiscard]] rvec phases() const;

    /// diag(conj(theta)), the physical reflection matrix.
    [[nodiscard]] cmat reflection_matrix() const;

    [[nodiscard]] double max_modulus_error() const;

private:
    explicit PhaseVector(cvec theta) : theta_(std::move(theta)) {}
    cvec theta_;
};

}  // namespace risemi
