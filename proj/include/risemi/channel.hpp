#pragma once

#include "risemi/scenario.hpp"
#include "risemi/types.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <vector>

namespace risemi {

// InF-SH line-of-sight path loss, d in meters, fc in GHz.
double path_loss_db(double d3d_m, double fc_ghz);
double path_loss_linear(double d3d_m, double fc_ghz);

/// sin(pi x) / (pi x), with sinc(0) = 1.
double sinc(double x);

/// Spatial correlation of one RIS together with a square-root factor.
///
/// `factor` holds only the retained eigen-directions (eigenvalues above the
/// clipping tolerance), so it is L^2 x rank and factor * factor^T equals the
/// clipped correlation matrix.
struct CorrelationModel {
    rmat R;
    rmat factor;
    double min_eigenvalue = 0.0;  // before clipping

    [[nodiscard]] Eigen::Index size() const { return R.rows(); }
    [[nodiscard]] Eigen::Index rank() const { return factor.cols(); }
    [[nodiscard]] rmat clipped() const { return factor * factor.transpose(); }
};

inline constexpr double kEigenClipTolerance = 1e-10;

CorrelationModel spatial_correlation(const std::vector<Vec3>& positions, double wavelength_m);

using Rng = std::mt19937_64;

/// Independent stream for one Monte Carlo trial, derived from the root seed.
Rng make_trial_rng(std::uint64_t seed, std::uint64_t trial);

/// One CN(0, variance) draw.
cd complex_normal(Rng& rng, double variance);

/// Columns are sqrt(scale) * F * w with w ~ CN(0, I).
cmat sample_correlated_rayleigh(const CorrelationModel& corr, double scale, Eigen::Index cols, Rng& rng);

/// L1^2 x L2^2 matrix of i.i.d. CN(0, scale) entries.
cmat sample_inter_ris(int side1, int side2, double scale, Rng& rng);

struct EmiDraw {
    cvec n;
    double scale = 0.0;  // A * sigma^2 in watts
};

EmiDraw sample_emi(const CorrelationModel& corr, double a_sigma2_w, Rng& rng);

/// Large-scale gains of every link (linear, unitless).
struct PathGains {
    double bs_ris[2] = {0.0, 0.0};
    std::vector<double> ris_ue[2];
    double ris_ris = 0.0;
};

/// One Monte Carlo draw of every small-scale channel in the network.
struct ChannelRealization {
    cmat H[2];                 // BS_n -> RIS_n, L_n^2 x T_n
    std::vector<cvec> g[2];    // RIS_n -> UE_kn, L_n^2 each
    cmat Z21;                  // RIS_2 -> RIS_1, L_1^2 x L_2^2
    PathGains gains;
    std::uint64_t trial = 0;
};

/// A validated configuration plus the per-RIS correlation models, shared
/// read-only by every trial.
class ScenarioModel {
public:
    explicit ScenarioModel(SystemConfig cfg);

    [[nodiscard]] const SystemConfig& config() const { return cfg_; }
    [[nodiscard]] const GeometryDerived& geometry() const { return cfg_.geometry(); }
    [[nodiscard]] const CorrelationModel& correlation(int cluster) const { return *corr_[cluster]; }
    [[nodiscard]] const PathGains& gains() const { return gains_; }

private:
    SystemConfig cfg_;
    std::shared_ptr<const CorrelationModel> corr_[2];
    PathGains gains_;
};

ChannelRealization draw_realization(const ScenarioModel& model, std::uint64_t trial, Rng& rng);
ChannelRealization draw_realization(const ScenarioModel& model, std::uint64_t trial);

/// Writes H1/H2/G1/G2/Z21 as `row,col,re,im` CSV plus gains.csv into `dir`.
void dump_realization(const ChannelRealization& real, const std::filesystem::path& dir);

}  // namespace risemi
