#include "risemi/precoding.hpp"

namespace risemi {

cmat effective_channel(const std::vector<cvec>& g, const PhaseVector& theta, const cmat& H) {
    if (theta.size() != H.rows()) throw DimensionError("effective_channel: theta and H disagree");
    cmat out(static_cast<Eigen::Index>(g.size()), H.cols());
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g[k].size() != H.rows()) throw DimensionError("effective_channel: g and H disagree");
        const cvec reflected = g[k].cwiseProduct(theta.vec());  // diag(theta) g
        out.row(static_cast<Eigen::Index>(k)) = reflected.adjoint() * H;
    }
    return out;
}

PrecoderSet zf_precoder(const cmat& H_eff) {
    const Eigen::Index K = H_eff.rows();
    const Eigen::Index T = H_eff.cols();
    if (K > T) throw DimensionError("zf_precoder: more users than antennas");
    if (K == 0) return {cmat(T, 0), H_eff};

    const cmat gram = H_eff * H_eff.adjoint();
    Eigen::SelfAdjointEigenSolver<cmat> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);
    const double hi = eig.eigenvalues()(K - 1);
    if (!(lo > 0.0) || !(hi / lo <= kZfMaxCondition)) throw ZfDegenerate();

    cmat U = H_eff.adjoint() * gram.llt().solve(cmat::Identity(K, K));
    for (Eigen::Index k = 0; k < K; ++k) {
        const double n = U.col(k).norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw ZfDegenerate();
        U.col(k) /= n;
    }
    return {std::move(U), H_eff};
}

PrecoderSet zf_precoder(const std::vector<cvec>& g, const PhaseVector& theta, const cmat& H) {
    return zf_precoder(effective_channel(g, theta, H));
}

}  // namespace risemi
