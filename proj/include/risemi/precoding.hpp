#pragma once

#include "risemi/phase.hpp"
#include "risemi/types.hpp"

#include <stdexcept>
#include <vector>

namespace risemi {

/// The effective channel Gram matrix is singular or too ill-conditioned for
/// zero forcing. Monte Carlo drivers skip the trial and count it.
class ZfDegenerate : public std::runtime_error {
public:
    ZfDegenerate() : std::runtime_error("ZF degenerate realization") {}
};

inline constexpr double kZfMaxCondition = 1e12;

struct PrecoderSet {
    cmat U;      // T x K, unit-norm columns
    cmat H_eff;  // K x T
};

/// Row k is g_k^H diag(conj(theta)) H, so that row_k * u = theta^H diag(g_k^*) H u.
cmat effective_channel(const std::vector<cvec>& g, const PhaseVector& theta, const cmat& H);

/// Pseudo-inverse of H_eff with each column normalised to unit norm.
PrecoderSet zf_precoder(const cmat& H_eff);

/// effective_channel followed by zf_precoder.
PrecoderSet zf_precoder(const std::vector<cvec>& g, const PhaseVector& theta, const cmat& H);

}  // namespace risemi
