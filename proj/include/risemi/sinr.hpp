#pragma once

#include "risemi/channel.hpp"
#include "risemi/phase.hpp"
#include "risemi/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace risemi {

/// Interference scenario seen by cluster 1.
enum class Scenario {
    Eif,     // no external interference
    Emi,     // EMI impinging on RIS 1
    Irr,     // inter-RIS reflections from cluster 2
    EmiIrr,  // both, including cluster-2 EMI reflected via RIS 2 and RIS 1
};

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

/// Per-user transmit powers in watts.
struct Powers {
    rvec cluster1;
    rvec cluster2;
};

/// Aggregate EMI power A_n sigma_n^2 in watts at each RIS.
struct EmiLevels {
    double cluster1_w = 0.0;
    double cluster2_w = 0.0;
};

/// Cascade vectors and quadratic forms of one cluster-1 user k.
///
/// Absent terms are left empty (zero columns / zero size) and read as zero.
struct UserCascade {
    cmat a;  // L1^2 x K1, column i = diag(g_k1^*) H1 u_i1
    cmat e;  // L1^2 x K2, column j = diag(g_k1^*) Z21 Theta2 H2 u_j2
    cmat B;  // diag(g_k1^*) A1 sigma1^2 R1 diag(g_k1)
    cmat C;  // emi_self_factor * B
    cmat D;  // diag(g_k1^*) Z21 Theta2 A2 sigma2^2 R2 Theta2^H Z21^H diag(g_k1)
};

struct CascadeTerms {
    std::vector<UserCascade> users;

    [[nodiscard]] int num_users() const { return static_cast<int>(users.size()); }
};

struct CascadeInputs {
    const cmat& H1;
    const std::vector<cvec>& g1;
    const cmat& U1;  // T1 x K1 precoders
    const cmat* H2 = nullptr;
    const cmat* U2 = nullptr;  // T2 x K2
    const cmat* Z21 = nullptr;
    const PhaseVector* theta2 = nullptr;
    const rmat* R1 = nullptr;
    const rmat* R2 = nullptr;
    EmiLevels emi{};
    double emi_self_factor = 4.0;
};

/// a_{k,i} for every user pair: column i of the result for user k.
cmat signal_cascade(const cvec& g, const cmat& H, const cmat& U);

/// Builds every cascade term. Terms whose inputs are absent or whose EMI
/// level is zero are left empty.
CascadeTerms build_cascades(const CascadeInputs& in);

/// Convenience overload over a full realization.
CascadeTerms build_cascades(const ChannelRealization& real, const PhaseVector& theta2, const cmat& U1,
                            const cmat& U2, const rmat& R1, const rmat& R2, EmiLevels emi,
                            double emi_self_factor);

struct SinrReport {
    Scenario scenario = Scenario::Eif;
    rvec sinr;
    rvec rate_bps_hz;
    double sum_rate_bps_hz = 0.0;  // unit weights
};

/// Per-user denominator components at theta; shared by SINR and gradients.
struct UserPower {
    double signal = 0.0;
    double intra = 0.0;  // sum over i != k
    double irr = 0.0;    // sum over all cluster-2 users
    double quad = 0.0;   // theta^H Q theta for the scenario's EMI matrix
};

UserPower user_power(Scenario s, const UserCascade& uc, int k, const cvec& theta, const Powers& p);

SinrReport sinr(Scenario s, const CascadeTerms& terms, const PhaseVector& theta1, const Powers& p,
                double noise_w);
SinrReport sinr_eif(const CascadeTerms& terms, const PhaseVector& theta1, const Powers& p, double noise_w);
SinrReport sinr_emi(const CascadeTerms& terms, const PhaseVector& theta1, const Powers& p, double noise_w);
SinrReport sinr_irr(const CascadeTerms& terms, const PhaseVector& theta1, const Powers& p, double noise_w);
SinrReport sinr_emi_irr(const CascadeTerms& terms, const PhaseVector& theta1, const Powers& p, double noise_w);

double rate_bps_hz(double sinr);

/// Sum over users of weights[k] * rate_k; empty weights mean all ones.
double sum_rate(const SinrReport& report, const rvec& weights = {});

/// 1 where rate_k < threshold.
Eigen::VectorXi outage_indicator(const SinrReport& report, double threshold_bps_hz);

}  // namespace risemi
