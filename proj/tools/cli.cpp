#include "cli.hpp"

#include "risemi/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace risemi::cli {

namespace {

struct Usage : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Args {
    std::string config;
    int trials = 500;
    std::uint64_t seed = 7;
    std::uint64_t trial = 0;
    std::vector<std::string> modes;
    std::vector<std::string> scenarios;
    std::vector<double> grid;
    std::string out;
    std::string trace;
    std::string dump_channels;
    unsigned threads = 0;
    double eta = 1e-3;
    int max_outer = 10;
    int inner_iters = 20;
};

std::vector<std::string> split_all(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& s : items) {
        std::stringstream ss(s);
        std::string part;
        while (std::getline(ss, part, ','))
            if (!part.empty()) out.push_back(part);
    }
    return out;
}

std::vector<Mode> parse_modes(const Args& a) {
    std::vector<Mode> out;
    for (const auto& s : split_all(a.modes)) out.push_back(parse_mode(s));
    if (out.empty()) out.push_back(Mode::FixedPhase);
    return out;
}

std::vector<ScenarioSpec> parse_scenarios(const Args& a, std::vector<ScenarioSpec> fallback) {
    std::vector<ScenarioSpec> out;
    for (const auto& s : split_all(a.scenarios)) out.push_back(ScenarioSpec::parse(s));
    return out.empty() ? fallback : out;
}

std::vector<double> arange(double lo, double hi, double step) {
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
    return v;
}

void add_common(CLI::App* sub, Args& a, bool config_required) {
    auto* c = sub->add_option("--config", a.config, "JSON config file");
    if (config_required) c->required();
    sub->add_option("--seed", a.seed, "root RNG seed");
    sub->add_option("--mode", a.modes, "fixed_phase, optimized_unaware, optimized_aware (comma separated)")
        ->delimiter(',');
    sub->add_option("--scenario", a.scenarios, "EIF, EMI@<dBm>, IRR, EMI_IRR@<dBm> (comma separated)")
        ->delimiter(',');
    sub->add_option("--trace", a.trace, "write per-iteration optimizer trace CSV here");
    sub->add_option("--eta", a.eta, "outer AO tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-outer", a.max_outer, "outer AO iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--inner-iters", a.inner_iters, "RCG iterations per outer step")->check(CLI::PositiveNumber);
}

void add_sweep(CLI::App* sub, Args& a) {
    add_common(sub, a, true);
    sub->add_option("--trials", a.trials, "Monte Carlo trials per grid point")->check(CLI::PositiveNumber);
    sub->add_option("--grid", a.grid, "sweep values, comma separated (overrides the default grid)")->delimiter(',');
    sub->add_option("--out", a.out, "CSV output path (stdout when absent)");
    sub->add_option("--dump-channels", a.dump_channels, "directory for trial-0 channel CSVs");
    sub->add_option("--threads", a.threads, "worker threads (0 = all cores)");
}

SystemConfig read_config(const Args& a) {
    return a.config.empty() ? default_config() : load_config(a.config);
}

void write_to(const std::string& path, std::ostream& fallback, const std::string& text) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int run_sweep_cmd(SweepVariable var, const Args& a, std::ostream& out) {
    SweepSpec spec;
    spec.variable = var;
    spec.trials = a.trials;
    spec.seed = a.seed;
    spec.threads = a.threads;
    spec.collect_trace = !a.trace.empty();
    if (!a.dump_channels.empty()) spec.dump_channels = a.dump_channels;
    spec.ao.eta = a.eta;
    spec.ao.max_outer_iters = a.max_outer;
    spec.rcg.max_iters = a.inner_iters;

    std::vector<ScenarioSpec> defaults = standard_scenarios();
    switch (var) {
        case SweepVariable::TxPower: spec.grid = arange(0.0, 40.0, 5.0); break;
        case SweepVariable::RisElements: spec.grid = {16, 64, 100, 144, 196, 256, 324, 400}; break;
        case SweepVariable::EmiPower:
            spec.grid = {-75, -70, -65, -60};
            defaults = {{Scenario::Emi, std::nullopt}, {Scenario::EmiIrr, std::nullopt}};
            break;
    }
    if (!a.grid.empty()) spec.grid = a.grid;
    try {
        spec.modes = parse_modes(a);
        spec.scenarios = parse_scenarios(a, defaults);
    } catch (const std::invalid_argument& e) {
        throw Usage(e.what());
    }
    if (spec.collect_trace && std::all_of(spec.modes.begin(), spec.modes.end(),
                                          [](Mode m) { return m == Mode::FixedPhase; }))
        throw Usage("--trace needs an optimized mode");
    if (var == SweepVariable::EmiPower)
        for (const auto& s : spec.scenarios)
            if (s.emi_dbm) throw Usage("sweep-emi takes scenarios without an @level");

    const SystemConfig cfg = validate_config(read_config(a));
    const SweepResult res = run_sweep(spec, cfg);

    std::ostringstream csv;
    write_csv(csv, res.records);
    write_to(a.out, out, csv.str());
    if (spec.collect_trace) {
        std::ostringstream tr;
        write_trace_csv(tr, res.trace);
        write_to(a.trace, out, tr.str());
    }
    return 0;
}

int run_single(const Args& a, std::ostream& out) {
    std::vector<Mode> modes;
    std::vector<ScenarioSpec> scenarios;
    try {
        modes = parse_modes(a);
        scenarios = parse_scenarios(a, standard_scenarios());
    } catch (const std::invalid_argument& e) {
        throw Usage(e.what());
    }
    const SystemConfig cfg = validate_config(read_config(a));
    AoOptions ao;
    ao.eta = a.eta;
    ao.max_outer_iters = a.max_outer;
    RcgOptions rcg = default_inner_rcg_options();
    rcg.max_iters = a.inner_iters;

    std::vector<TraceRow> trace;
    const auto rows = run_single_trial(cfg, scenarios, modes, a.seed, a.trial, ao, rcg,
                                       a.trace.empty() ? nullptr : &trace);
    out << "scenario,mode,sum_rate_bps_hz,user,rate_bps_hz,sinr\n";
    for (const auto& r : rows) {
        if (r.outcome.skipped) {
            out << r.scenario << ',' << to_string(r.mode) << ",skipped,,,\n";
            continue;
        }
        for (Eigen::Index k = 0; k < r.outcome.rates.size(); ++k)
            out << r.scenario << ',' << to_string(r.mode) << ',' << fmt(r.outcome.sum_rate_bps_hz) << ','
                << k + 1 << ',' << fmt(r.outcome.rates(k)) << ',' << fmt(r.sinr(k)) << '\n';
    }
    if (!a.trace.empty()) {
        std::ostringstream tr;
        write_trace_csv(tr, trace);
        write_to(a.trace, out, tr.str());
    }
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-RIS MISO simulator with EMI and inter-RIS reflections", "risemi"};
    app.require_subcommand(1);
    Args a;
    auto* power = app.add_subcommand("sweep-power", "sweep BS-1 transmit power (dBm)");
    auto* elems = app.add_subcommand("sweep-elements", "sweep RIS-1 element count (perfect squares)");
    auto* emi = app.add_subcommand("sweep-emi", "sweep EMI power (dBm)");
    auto* single = app.add_subcommand("single-trial", "evaluate one realization and print per-user SINR");
    add_sweep(power, a);
    add_sweep(elems, a);
    add_sweep(emi, a);
    add_common(single, a, false);
    single->add_option("--trial", a.trial, "trial index");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (power->parsed()) return run_sweep_cmd(SweepVariable::TxPower, a, out);
        if (elems->parsed()) return run_sweep_cmd(SweepVariable::RisElements, a, out);
        if (emi->parsed()) return run_sweep_cmd(SweepVariable::EmiPower, a, out);
        return run_single(a, out);
    } catch (const Usage& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace risemi::cli
