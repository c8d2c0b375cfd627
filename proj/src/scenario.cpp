#include "risemi/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace risemi {

namespace {

bool finite(const Vec3& p) { return p.allFinite(); }

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

const GeometryDerived& SystemConfig::geometry() const {
    if (!derived) throw ConfigError("config has not been validated");
    return *derived;
}

double distance_3d(const Vec3& p, const Vec3& q) { return (p - q).norm(); }

double noise_power_watts(double noise_psd_dbm_hz, double bandwidth_hz) {
    return dbm_to_watts(noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz));
}

double wavelength_m(double carrier_frequency_ghz) {
    return kSpeedOfLight / (carrier_frequency_ghz * 1e9);
}

std::vector<Vec3> ris_element_positions(int side, double element_area_m2) {
    if (side < 1) throw ConfigError("RIS side must be >= 1");
    if (!(element_area_m2 > 0.0)) throw ConfigError("element area must be > 0");

    const double pitch = std::sqrt(element_area_m2);
    const double half = (side - 1) * pitch / 2.0;
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(side) * side);
    for (int l = 0; l < side * side; ++l) {
        const double x = -half + pitch * (l % side);
        const double y = half - pitch * (l / side);
        out.emplace_back(x, y, 0.0);
    }
    return out;
}

SystemConfig validate_config(SystemConfig cfg) {
    require(std::isfinite(cfg.carrier_frequency_ghz) && cfg.carrier_frequency_ghz > 0.0,
            "carrier_frequency_ghz must be > 0");
    require(std::isfinite(cfg.bandwidth_hz) && cfg.bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
    require(std::isfinite(cfg.noise_psd_dbm_hz), "noise_psd_dbm_hz must be finite");
    require(cfg.mc_trials >= 1, "mc_trials must be >= 1");
    require(std::isfinite(cfg.rate_threshold_bps_hz) && cfg.rate_threshold_bps_hz > 0.0,
            "rate_threshold_bps_hz must be > 0");
    require(cfg.clusters.size() == 2, "exactly 2 clusters are required");
    require(!cfg.ris_ris_correlated, "correlated RIS-RIS channels are not supported");
    require(cfg.emi_self_factor == 1.0 || cfg.emi_self_factor == 4.0,
            "emi_self_factor must be 1 or 4");

    GeometryDerived geo;
    geo.wavelength_m = wavelength_m(cfg.carrier_frequency_ghz);
    geo.noise_power_w = noise_power_watts(cfg.noise_psd_dbm_hz, cfg.bandwidth_hz);

    for (std::size_t n = 0; n < cfg.clusters.size(); ++n) {
        auto& c = cfg.clusters[n];
        const std::string tag = "cluster " + std::to_string(n + 1) + ": ";
        require(c.num_antennas >= 1, tag + "num_antennas must be >= 1");
        require(c.ris_side >= 1, tag + "ris_side must be >= 1");
        require(c.num_users() >= 1, tag + "at least one user is required");
        require(c.num_users() <= c.num_antennas,
                tag + "ZF infeasible: more users than transmit antennas");
        require(finite(c.bs_position), tag + "missing or non-finite bs_position");
        require(finite(c.ris_position), tag + "missing or non-finite ris_position");
        for (const auto& ue : c.ue_positions) require(finite(ue), tag + "non-finite ue position");
        require(std::isfinite(c.tx_power_dbm), tag + "tx_power_dbm must be finite");
        if (c.emi_power_dbm) require(std::isfinite(*c.emi_power_dbm), tag + "emi_power_dbm must be finite");

        if (!c.element_area_m2) c.element_area_m2 = std::pow(geo.wavelength_m / 4.0, 2);
        require(*c.element_area_m2 > 0.0, tag + "element_area_m2 must be > 0");

        if (c.user_weights.empty()) c.user_weights.assign(c.ue_positions.size(), 1.0);
        require(c.user_weights.size() == c.ue_positions.size(), tag + "user_weights length mismatch");
        for (double w : c.user_weights) require(std::isfinite(w) && w >= 0.0, tag + "user weight must be >= 0");

        ClusterDerived cd;
        cd.element_positions = ris_element_positions(c.ris_side, *c.element_area_m2);
        cd.bs_ris_distance_m = distance_3d(c.bs_position, c.ris_position);
        require(cd.bs_ris_distance_m > 0.0, tag + "BS and RIS coincide");
        for (const auto& ue : c.ue_positions) {
            const double d = distance_3d(c.ris_position, ue);
            require(d > 0.0, tag + "UE coincides with RIS");
            cd.ris_ue_distance_m.push_back(d);
        }
        cd.tx_power_w = dbm_to_watts(c.tx_power_dbm);
        cd.emi_w = c.emi_power_dbm ? dbm_to_watts(*c.emi_power_dbm) : 0.0;
        geo.clusters.push_back(std::move(cd));
    }
    geo.ris_ris_distance_m = distance_3d(cfg.clusters[0].ris_position, cfg.clusters[1].ris_position);
    require(geo.ris_ris_distance_m > 0.0, "RIS 1 and RIS 2 coincide");

    cfg.derived = std::move(geo);
    return cfg;
}

SystemConfig default_config() {
    SystemConfig cfg;
    ClusterConfig c1;
    c1.bs_position = {0.0, 0.0, 4.0};
    c1.ris_position = {5.0, 0.0, 4.0};
    c1.ue_positions = {{7.0, 2.0, 1.5}, {7.0, -2.0, 1.5}};
    c1.num_antennas = 2;
    c1.ris_side = 20;
    c1.emi_power_dbm = -65.0;

    ClusterConfig c2;
    c2.bs_position = {40.0, 0.0, 4.0};
    c2.ris_position = {35.0, 0.0, 4.0};
    c2.ue_positions = {{33.0, 2.0, 1.5}, {33.0, -2.0, 1.5}};
    c2.num_antennas = 2;
    c2.ris_side = 20;
    c2.emi_power_dbm = -65.0;

    cfg.clusters = {c1, c2};
    return cfg;
}

// ---------------------------------------------------------------- JSON I/O

namespace {

Vec3 vec3_from(const nlohmann::json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(name + " must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json vec3_to(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

ClusterConfig cluster_from(const nlohmann::json& j, std::size_t n) {
    const std::string tag = "clusters[" + std::to_string(n) + "].";
    for (const char* key : {"bs_position", "ris_position", "ue_positions"})
        if (!j.contains(key)) throw ConfigError(tag + key + " is missing");

    ClusterConfig c;
    c.bs_position = vec3_from(j.at("bs_position"), tag + "bs_position");
    c.ris_position = vec3_from(j.at("ris_position"), tag + "ris_position");
    for (const auto& ue : j.at("ue_positions")) c.ue_positions.push_back(vec3_from(ue, tag + "ue_positions"));
    c.num_antennas = j.value("num_antennas", c.num_antennas);
    c.ris_side = j.value("ris_side", c.ris_side);
    if (j.contains("element_area_m2") && !j.at("element_area_m2").is_null())
        c.element_area_m2 = j.at("element_area_m2").get<double>();
    c.tx_power_dbm = j.value("tx_power_dbm", c.tx_power_dbm);
    if (j.contains("emi_power_dbm")) {
        const auto& e = j.at("emi_power_dbm");
        if (e.is_string()) {
            if (e.get<std::string>() != "off") throw ConfigError(tag + "emi_power_dbm must be a number or \"off\"");
        } else if (!e.is_null()) {
            c.emi_power_dbm = e.get<double>();
        }
    }
    if (j.contains("user_weights")) c.user_weights = j.at("user_weights").get<std::vector<double>>();
    return c;
}

}  // namespace

SystemConfig config_from_json(const nlohmann::json& j) {
    try {
        SystemConfig cfg;
        cfg.carrier_frequency_ghz = j.value("carrier_frequency_ghz", cfg.carrier_frequency_ghz);
        cfg.bandwidth_hz = j.value("bandwidth_hz", cfg.bandwidth_hz);
        cfg.noise_psd_dbm_hz = j.value("noise_psd_dbm_hz", cfg.noise_psd_dbm_hz);
        cfg.ris_ris_correlated = j.value("ris_ris_correlated", cfg.ris_ris_correlated);
        cfg.rate_threshold_bps_hz = j.value("rate_threshold_bps_hz", cfg.rate_threshold_bps_hz);
        cfg.mc_trials = j.value("mc_trials", cfg.mc_trials);
        cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
        cfg.emi_self_factor = j.value("emi_self_factor", cfg.emi_self_factor);
        if (!j.contains("clusters") || !j.at("clusters").is_array())
            throw ConfigError("clusters array is missing");
        const auto& cl = j.at("clusters");
        for (std::size_t n = 0; n < cl.size(); ++n) cfg.clusters.push_back(cluster_from(cl[n], n));
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

nlohmann::json config_to_json(const SystemConfig& cfg) {
    nlohmann::json j;
    j["carrier_frequency_ghz"] = cfg.carrier_frequency_ghz;
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["noise_psd_dbm_hz"] = cfg.noise_psd_dbm_hz;
    j["ris_ris_correlated"] = cfg.ris_ris_correlated;
    j["rate_threshold_bps_hz"] = cfg.rate_threshold_bps_hz;
    j["mc_trials"] = cfg.mc_trials;
    j["rng_seed"] = cfg.rng_seed;
    j["emi_self_factor"] = cfg.emi_self_factor;
    j["clusters"] = nlohmann::json::array();
    for (const auto& c : cfg.clusters) {
        nlohmann::json cj;
        cj["bs_position"] = vec3_to(c.bs_position);
        cj["ris_position"] = vec3_to(c.ris_position);
        cj["ue_positions"] = nlohmann::json::array();
        for (const auto& ue : c.ue_positions) cj["ue_positions"].push_back(vec3_to(ue));
        cj["num_antennas"] = c.num_antennas;
        cj["ris_side"] = c.ris_side;
        if (c.element_area_m2) cj["element_area_m2"] = *c.element_area_m2;
        cj["tx_power_dbm"] = c.tx_power_dbm;
        if (c.emi_power_dbm) cj["emi_power_dbm"] = *c.emi_power_dbm;
        else cj["emi_power_dbm"] = "off";
        if (!c.user_weights.empty()) cj["user_weights"] = c.user_weights;
        j["clusters"].push_back(cj);
    }
    return j;
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace risemi
