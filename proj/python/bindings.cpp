#include "risemi/experiment.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace risemi;

namespace {

// Configs cross the boundary as JSON text; the Python wrapper handles dicts.
SystemConfig parse_config(const std::string& text) {
    return validate_config(config_from_json(nlohmann::json::parse(text)));
}

SweepVariable parse_variable(const std::string& v) {
    if (v == "tx_power_dbm" || v == "power") return SweepVariable::TxPower;
    if (v == "ris_elements_L1sq" || v == "elements") return SweepVariable::RisElements;
    if (v == "emi_power_dbm" || v == "emi") return SweepVariable::EmiPower;
    throw std::invalid_argument("unknown sweep variable: " + v);
}

py::dict record_dict(const MetricRecord& r) {
    py::dict d;
    d["sweep_value"] = r.sweep_value;
    d["scenario"] = r.scenario;
    d["mode"] = std::string(to_string(r.mode));
    d["mean_sum_rate_bps_hz"] = r.mean_sum_rate_bps_hz;
    d["sum_rate_std_error"] = r.sum_rate_std_error;
    d["outage"] = rvec(r.outage);
    d["trials"] = r.trials;
    d["skipped"] = r.skipped;
    d["valid"] = r.valid;
    d["per_trial_sum_rate"] = r.per_trial_sum_rate;
    return d;
}

}  // namespace

PYBIND11_MODULE(_risemi, m) {
    m.doc() = "Multi-RIS MISO simulation core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ZfDegenerate>(m, "ZfDegenerate", PyExc_RuntimeError);

    m.def("default_config_json", [] { return config_to_json(validate_config(default_config())).dump(); });
    m.def("validate_config_json", [](const std::string& text) { return config_to_json(parse_config(text)).dump(); });

    m.def("path_loss_db", &path_loss_db, py::arg("distance_m"), py::arg("fc_ghz"));
    m.def("noise_power_watts", &noise_power_watts, py::arg("noise_psd_dbm_hz"), py::arg("bandwidth_hz"));
    m.def(
        "spatial_correlation",
        [](int side, double element_area_m2, double wavelength) {
            return spatial_correlation(ris_element_positions(side, element_area_m2), wavelength).R;
        },
        py::arg("side"), py::arg("element_area_m2"), py::arg("wavelength_m"));

    m.def(
        "draw_realization",
        [](const std::string& cfg, std::uint64_t trial) {
            const ScenarioModel model(parse_config(cfg));
            const auto r = draw_realization(model, trial);
            py::dict d;
            d["H1"] = r.H[0];
            d["H2"] = r.H[1];
            d["g1"] = r.g[0];
            d["g2"] = r.g[1];
            d["Z21"] = r.Z21;
            return d;
        },
        py::arg("config_json"), py::arg("trial"));

    m.def(
        "zf_precoder", [](const cmat& H_eff) { return zf_precoder(H_eff).U; }, py::arg("H_eff"),
        "Unit-norm zero-forcing precoders (columns) for a K x T effective channel.");

    m.def(
        "evaluate_fixed",
        [](const std::string& cfg, std::uint64_t trial, const std::string& scenario) {
            const ScenarioModel model(parse_config(cfg));
            const auto real = draw_realization(model, trial);
            const auto spec = ScenarioSpec::parse(scenario);
            const auto ctx = make_link_context(model, real, emi_levels_for(spec, model.config()));
            const auto rep = evaluate_fixed(ctx, spec.kind);
            return py::make_tuple(rep.sinr, rep.rate_bps_hz);
        },
        py::arg("config_json"), py::arg("trial"), py::arg("scenario"),
        "Zero-phase SINRs and rates of cluster 1 for one trial.");

    m.def(
        "run_sweep",
        [](const std::string& cfg, const std::string& variable, std::vector<double> grid,
           std::vector<std::string> scenarios, std::vector<std::string> modes, int trials, std::uint64_t seed,
           unsigned threads) {
            SweepSpec spec;
            spec.variable = parse_variable(variable);
            spec.grid = std::move(grid);
            for (const auto& s : scenarios) spec.scenarios.push_back(ScenarioSpec::parse(s));
            spec.modes.clear();
            for (const auto& s : modes) spec.modes.push_back(parse_mode(s));
            spec.trials = trials;
            spec.seed = seed;
            spec.threads = threads;
            const SystemConfig c = parse_config(cfg);
            SweepResult res;
            {
                py::gil_scoped_release release;
                res = run_sweep(spec, c);
            }
            py::list out;
            for (const auto& r : res.records) out.append(record_dict(r));
            return out;
        },
        py::arg("config_json"), py::arg("variable"), py::arg("grid"), py::arg("scenarios"),
        py::arg("modes") = std::vector<std::string>{"fixed_phase"}, py::arg("trials") = 100, py::arg("seed") = 7,
        py::arg("threads") = 0);
}
