#pragma once

#include "risemi/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace risemi {

/// One BS, one RIS and its served users.
struct ClusterConfig {
    Vec3 bs_position{0.0, 0.0, 4.0};
    Vec3 ris_position{0.0, 0.0, 4.0};
    std::vector<Vec3> ue_positions;
    int num_antennas = 2;
    int ris_side = 20;                      // grid is ris_side x ris_side
    std::optional<double> element_area_m2;  // filled with (lambda/4)^2 when absent
    double tx_power_dbm = 30.0;
    std::optional<double> emi_power_dbm;    // aggregate A*sigma^2; nullopt = off
    std::vector<double> user_weights;       // empty = all ones

    [[nodiscard]] int num_users() const { return static_cast<int>(ue_positions.size()); }
    [[nodiscard]] int num_elements() const { return ris_side * ris_side; }
};

struct ClusterDerived {
    std::vector<Vec3> element_positions;  // RIS-local frame, z = 0
    double bs_ris_distance_m = 0.0;
    std::vector<double> ris_ue_distance_m;
    double tx_power_w = 0.0;
    double emi_w = 0.0;  // 0 when EMI is off
};

struct GeometryDerived {
    double wavelength_m = 0.0;
    double noise_power_w = 0.0;
    double ris_ris_distance_m = 0.0;
    std::vector<ClusterDerived> clusters;
};

struct SystemConfig {
    double carrier_frequency_ghz = 3.0;
    double bandwidth_hz = 1e6;
    double noise_psd_dbm_hz = -174.0;
    std::vector<ClusterConfig> clusters;
    bool ris_ris_correlated = false;
    double rate_threshold_bps_hz = 0.1;
    int mc_trials = 500;
    std::uint64_t rng_seed = 7;
    // Multiplier on the cluster-1 EMI quadratic form in the joint EMI+IRR SINR.
    double emi_self_factor = 4.0;

    std::optional<GeometryDerived> derived;  // set by validate_config

    [[nodiscard]] bool is_validated() const { return derived.has_value(); }
    [[nodiscard]] const GeometryDerived& geometry() const;
};

/// Checks every physical invariant and attaches derived quantities.
/// Throws ConfigError on the first violation.
SystemConfig validate_config(SystemConfig cfg);

/// L*L element centres of a square RIS, row by row, centred at the origin.
std::vector<Vec3> ris_element_positions(int side, double element_area_m2);

double distance_3d(const Vec3& p, const Vec3& q);

double noise_power_watts(double noise_psd_dbm_hz, double bandwidth_hz);
double wavelength_m(double carrier_frequency_ghz);

/// Built-in indoor-factory layout; mirrors configs/default.json.
SystemConfig default_config();

// Config file I/O. The schema is documented in README.md.
SystemConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SystemConfig& cfg);
SystemConfig load_config(const std::filesystem::path& path);

}  // namespace risemi
