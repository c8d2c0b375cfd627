#include "risemi/channel.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

namespace risemi {

double path_loss_db(double d3d_m, double fc_ghz) {
    if (!(d3d_m > 0.0)) throw std::domain_error("path loss: distance must be > 0");
    if (!(fc_ghz > 0.0)) throw std::domain_error("path loss: carrier frequency must be > 0");
    return 31.84 + 21.50 * std::log10(d3d_m) + 19.00 * std::log10(fc_ghz);
}

double path_loss_linear(double d3d_m, double fc_ghz) {
    return std::pow(10.0, -path_loss_db(d3d_m, fc_ghz) / 10.0);
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

CorrelationModel spatial_correlation(const std::vector<Vec3>& positions, double wavelength_m) {
    if (positions.empty()) throw std::invalid_argument("spatial correlation: no positions");
    if (!(wavelength_m > 0.0)) throw std::invalid_argument("spatial correlation: wavelength must be > 0");
    for (const auto& p : positions)
        if (!p.allFinite()) throw std::invalid_argument("spatial correlation: non-finite position");

    const auto n = static_cast<Eigen::Index>(positions.size());
    CorrelationModel out;
    out.R.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.R(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = sinc(2.0 * (positions[i] - positions[j]).norm() / wavelength_m);
            out.R(i, j) = v;
            out.R(j, i) = v;
        }
    }

    Eigen::SelfAdjointEigenSolver<rmat> eig(out.R);
    if (eig.info() != Eigen::Success) throw std::runtime_error("spatial correlation: eigensolver failed");
    const rvec& lambda = eig.eigenvalues();  // ascending
    out.min_eigenvalue = lambda(0);

    Eigen::Index first = 0;
    while (first < n && lambda(first) < kEigenClipTolerance) ++first;
    const Eigen::Index rank = n - first;
    out.factor = eig.eigenvectors().rightCols(rank) * lambda.tail(rank).cwiseSqrt().asDiagonal();
    return out;
}

Rng make_trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      0x52495345u};
    return Rng(seq);
}

cd complex_normal(Rng& rng, double variance) {
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

namespace {

cmat standard_complex_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    cmat w(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) w(r, c) = complex_normal(rng, 1.0);
    return w;
}

}  // namespace

cmat sample_correlated_rayleigh(const CorrelationModel& corr, double scale, Eigen::Index cols, Rng& rng) {
    if (scale < 0.0) throw std::invalid_argument("correlated Rayleigh: scale must be >= 0");
    const cmat w = standard_complex_normal(corr.rank(), cols, rng);
    return std::sqrt(scale) * (corr.factor.cast<cd>() * w);
}

cmat sample_inter_ris(int side1, int side2, double scale, Rng& rng) {
    if (scale < 0.0) throw std::invalid_argument("inter-RIS channel: scale must be >= 0");
    const Eigen::Index rows = static_cast<Eigen::Index>(side1) * side1;
    const Eigen::Index cols = static_cast<Eigen::Index>(side2) * side2;
    return std::sqrt(scale) * standard_complex_normal(rows, cols, rng);
}

EmiDraw sample_emi(const CorrelationModel& corr, double a_sigma2_w, Rng& rng) {
    if (a_sigma2_w < 0.0) throw std::invalid_argument("EMI: power must be >= 0");
    return {sample_correlated_rayleigh(corr, a_sigma2_w, 1, rng).col(0), a_sigma2_w};
}

ScenarioModel::ScenarioModel(SystemConfig cfg)
    : cfg_(cfg.is_validated() ? std::move(cfg) : validate_config(std::move(cfg))) {
    const auto& geo = cfg_.geometry();
    const double fc = cfg_.carrier_frequency_ghz;
    for (int n = 0; n < 2; ++n) {
        corr_[n] = std::make_shared<const CorrelationModel>(
            spatial_correlation(geo.clusters[n].element_positions, geo.wavelength_m));
        gains_.bs_ris[n] = path_loss_linear(geo.clusters[n].bs_ris_distance_m, fc);
        for (double d : geo.clusters[n].ris_ue_distance_m) gains_.ris_ue[n].push_back(path_loss_linear(d, fc));
    }
    gains_.ris_ris = path_loss_linear(geo.ris_ris_distance_m, fc);
}

ChannelRealization draw_realization(const ScenarioModel& model, std::uint64_t trial, Rng& rng) {
    const auto& cfg = model.config();
    const auto& pg = model.gains();
    ChannelRealization real;
    real.gains = pg;
    real.trial = trial;

    double area[2];
    for (int n = 0; n < 2; ++n) {
        const auto& c = cfg.clusters[n];
        area[n] = *c.element_area_m2;
        const auto& corr = model.correlation(n);
        real.H[n] = sample_correlated_rayleigh(corr, area[n] * pg.bs_ris[n], c.num_antennas, rng);
        for (int k = 0; k < c.num_users(); ++k)
            real.g[n].push_back(sample_correlated_rayleigh(corr, area[n] * pg.ris_ue[n][k], 1, rng).col(0));
    }
    real.Z21 = sample_inter_ris(cfg.clusters[0].ris_side, cfg.clusters[1].ris_side,
                                std::sqrt(area[0] * area[1]) * pg.ris_ris, rng);
    return real;
}

ChannelRealization draw_realization(const ScenarioModel& model, std::uint64_t trial) {
    Rng rng = make_trial_rng(model.config().rng_seed, trial);
    return draw_realization(model, trial, rng);
}

namespace {

void write_matrix_csv(const cmat& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "row,col,re,im\n" << std::setprecision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
}

cmat stack_columns(const std::vector<cvec>& cols) {
    if (cols.empty()) return {};
    cmat m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = cols[k];
    return m;
}

}  // namespace

void dump_realization(const ChannelRealization& real, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_matrix_csv(real.H[0], dir / "H1.csv");
    write_matrix_csv(real.H[1], dir / "H2.csv");
    write_matrix_csv(stack_columns(real.g[0]), dir / "G1.csv");
    write_matrix_csv(stack_columns(real.g[1]), dir / "G2.csv");
    write_matrix_csv(real.Z21, dir / "Z21.csv");

    std::ofstream out(dir / "gains.csv");
    out << "link,cluster,user,gain\n" << std::setprecision(17);
    for (int n = 0; n < 2; ++n) {
        out << "bs_ris," << n + 1 << ",," << real.gains.bs_ris[n] << '\n';
        for (std::size_t k = 0; k < real.gains.ris_ue[n].size(); ++k)
            out << "ris_ue," << n + 1 << ',' << k + 1 << ',' << real.gains.ris_ue[n][k] << '\n';
    }
    out << "ris_ris,,," << real.gains.ris_ris << '\n';
}

}  // namespace risemi
