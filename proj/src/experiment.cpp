#include "risemi/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

namespace risemi {

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::TxPower: return "tx_power_dbm";
        case SweepVariable::RisElements: return "ris_elements_L1sq";
        case SweepVariable::EmiPower: return "emi_power_dbm";
    }
    return "?";
}

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::FixedPhase: return "fixed_phase";
        case Mode::OptimizedUnaware: return "optimized_unaware";
        case Mode::OptimizedAware: return "optimized_aware";
    }
    return "?";
}

Mode parse_mode(std::string_view name) {
    if (name == "fixed_phase" || name == "fixed") return Mode::FixedPhase;
    if (name == "optimized_unaware" || name == "unaware") return Mode::OptimizedUnaware;
    if (name == "optimized_aware" || name == "aware") return Mode::OptimizedAware;
    throw std::invalid_argument("unknown mode: " + std::string(name));
}

namespace {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

bool has_emi(Scenario s) { return s == Scenario::Emi || s == Scenario::EmiIrr; }

}  // namespace

std::string ScenarioSpec::label() const {
    std::string out(to_string(kind));
    if (emi_dbm && has_emi(kind)) out += "@" + format_number(*emi_dbm);
    return out;
}

ScenarioSpec ScenarioSpec::parse(std::string_view text) {
    ScenarioSpec s;
    const auto at = text.find('@');
    s.kind = parse_scenario(text.substr(0, at));
    if (at != std::string_view::npos) {
        const std::string level(text.substr(at + 1));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(level, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != level.size() || level.empty())
            throw std::invalid_argument("bad EMI level in scenario: " + std::string(text));
        if (!has_emi(s.kind)) throw std::invalid_argument("EMI level given for a scenario without EMI: " + std::string(text));
        s.emi_dbm = v;
    }
    return s;
}

std::vector<ScenarioSpec> standard_scenarios() {
    return {{Scenario::Eif, std::nullopt},    {Scenario::Emi, -75.0},    {Scenario::Emi, -65.0},
            {Scenario::Irr, std::nullopt},    {Scenario::EmiIrr, -75.0}, {Scenario::EmiIrr, -65.0}};
}

MetricRecord aggregate(const std::vector<TrialOutcome>& outcomes, double rate_threshold_bps_hz) {
    MetricRecord rec;
    rec.trials = static_cast<int>(outcomes.size());
    Eigen::Index users = 0;
    for (const auto& o : outcomes)
        if (!o.skipped) users = std::max(users, o.rates.size());
    rec.outage = rvec::Zero(users);

    double sum = 0.0, sum_sq = 0.0;
    int valid = 0;
    rec.per_trial_sum_rate.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        if (o.skipped) {
            ++rec.skipped;
            rec.per_trial_sum_rate.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        ++valid;
        sum += o.sum_rate_bps_hz;
        sum_sq += o.sum_rate_bps_hz * o.sum_rate_bps_hz;
        rec.per_trial_sum_rate.push_back(o.sum_rate_bps_hz);
        for (Eigen::Index k = 0; k < o.rates.size(); ++k)
            if (o.rates(k) < rate_threshold_bps_hz) rec.outage(k) += 1.0;
    }
    if (valid == 0) throw std::runtime_error("aggregate: every trial was skipped");

    rec.valid = true;
    rec.mean_sum_rate_bps_hz = sum / valid;
    rec.outage /= valid;
    if (valid > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / valid) / (valid - 1));
        rec.sum_rate_std_error = std::sqrt(var / valid);
    }
    return rec;
}

SystemConfig apply_sweep_value(const SystemConfig& cfg, SweepVariable v, double value) {
    SystemConfig out = cfg;
    out.derived.reset();
    switch (v) {
        case SweepVariable::TxPower: out.clusters.at(0).tx_power_dbm = value; break;
        case SweepVariable::RisElements: {
            const auto side = static_cast<int>(std::lround(std::sqrt(value)));
            if (side < 1 || static_cast<double>(side) * side != value)
                throw std::invalid_argument("RIS element count must be a perfect square: " + format_number(value));
            out.clusters.at(0).ris_side = side;
            break;
        }
        case SweepVariable::EmiPower: break;  // applied per scenario
    }
    return validate_config(std::move(out));
}

EmiLevels emi_levels_for(const ScenarioSpec& s, const SystemConfig& cfg, std::optional<double> sweep_emi_dbm) {
    const auto& geo = cfg.geometry();
    EmiLevels lv;
    if (!has_emi(s.kind)) return lv;
    const std::optional<double> level = sweep_emi_dbm ? sweep_emi_dbm : s.emi_dbm;
    lv.cluster1_w = level ? dbm_to_watts(*level) : geo.clusters[0].emi_w;
    if (s.kind == Scenario::EmiIrr) lv.cluster2_w = level ? dbm_to_watts(*level) : geo.clusters[1].emi_w;
    return lv;
}

namespace {

struct Combo {
    std::size_t scenario;
    Mode mode;
};

struct TrialJob {
    const ScenarioModel* model;
    const std::vector<ScenarioSpec>* scenarios;
    const std::vector<Combo>* combos;
    std::optional<double> sweep_emi;
    const AoOptions* ao;
    const RcgOptions* rcg;
    int trace_combo;  // -1 = none
};

struct TrialRun {
    std::vector<TrialOutcome> outcomes;  // per combo
    std::vector<rvec> sinr;
    std::vector<TraceRow> trace;
};

TrialRun run_trial(const TrialJob& job, const ChannelRealization& real) {
    const auto& cfg = job.model->config();
    TrialRun run;
    run.outcomes.resize(job.combos->size());
    run.sinr.resize(job.combos->size());

    bool need_opt = false;
    for (const auto& c : *job.combos) need_opt |= c.mode != Mode::FixedPhase;

    std::optional<AoResult> c2;
    bool c2_failed = false;
    if (need_opt) {
        const LinkContext ctx0 = make_link_context(*job.model, real, {});
        try {
            c2 = optimize_cluster2(ctx0, *job.ao, *job.rcg);
        } catch (const ZfDegenerate&) {
            c2_failed = true;
        }
    }

    for (std::size_t ci = 0; ci < job.combos->size(); ++ci) {
        const Combo& combo = (*job.combos)[ci];
        const ScenarioSpec& spec = (*job.scenarios)[combo.scenario];
        const LinkContext ctx = make_link_context(*job.model, real, emi_levels_for(spec, cfg, job.sweep_emi));
        TrialOutcome& out = run.outcomes[ci];
        try {
            SinrReport report;
            if (combo.mode == Mode::FixedPhase) {
                report = evaluate_fixed(ctx, spec.kind);
            } else {
                if (c2_failed) throw ZfDegenerate();
                AoOptions ao = *job.ao;
                ao.scenario = spec.kind;
                ao.awareness = combo.mode == Mode::OptimizedAware ? Awareness::Aware : Awareness::Unaware;
                OptimizedTrial opt = optimize_cluster1(ctx, c2->theta, c2->precoders.U, ao, *job.rcg);
                report = std::move(opt.report);
                if (static_cast<int>(ci) == job.trace_combo)
                    for (const auto& r : opt.cluster1.trace)
                        run.trace.push_back({real.trial, r.outer_iter, r.inner_iter, r.objective, r.grad_norm, r.step});
            }
            out.sum_rate_bps_hz = sum_rate(report, ctx.weights1);
            out.rates = report.rate_bps_hz;
            run.sinr[ci] = report.sinr;
        } catch (const ZfDegenerate&) {
            out.skipped = true;
        }
    }
    return run;
}

template <class Fn>
void parallel_for(int n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SystemConfig& cfg_in) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
    if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (spec.scenarios.empty() || spec.modes.empty()) throw std::invalid_argument("no scenarios or modes");

    SystemConfig base = cfg_in;
    base.rng_seed = spec.seed;
    base.mc_trials = spec.trials;

    std::vector<Combo> combos;
    int trace_combo = -1;
    for (std::size_t s = 0; s < spec.scenarios.size(); ++s)
        for (Mode m : spec.modes) {
            if (spec.collect_trace && trace_combo < 0 && m != Mode::FixedPhase)
                trace_combo = static_cast<int>(combos.size());
            combos.push_back({s, m});
        }

    SweepResult result;
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        const double value = spec.grid[gi];
        const auto t0 = std::chrono::steady_clock::now();
        const ScenarioModel model(apply_sweep_value(base, spec.variable, value));

        TrialJob job{&model, &spec.scenarios, &combos,
                     spec.variable == SweepVariable::EmiPower ? std::optional<double>(value) : std::nullopt,
                     &spec.ao, &spec.rcg, gi == 0 ? trace_combo : -1};

        std::vector<TrialRun> runs(spec.trials);
        parallel_for(spec.trials, spec.threads, [&](int t) {
            const ChannelRealization real = draw_realization(model, static_cast<std::uint64_t>(t));
            if (gi == 0 && t == 0 && spec.dump_channels) dump_realization(real, *spec.dump_channels);
            runs[t] = run_trial(job, real);
        });
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        for (const auto& r : runs) result.trace.insert(result.trace.end(), r.trace.begin(), r.trace.end());

        for (std::size_t ci = 0; ci < combos.size(); ++ci) {
            std::vector<TrialOutcome> outs;
            outs.reserve(runs.size());
            for (const auto& r : runs) outs.push_back(r.outcomes[ci]);
            MetricRecord rec;
            try {
                rec = aggregate(outs, model.config().rate_threshold_bps_hz);
            } catch (const std::runtime_error&) {
                rec.trials = spec.trials;
                rec.skipped = spec.trials;
                rec.valid = false;
                rec.mean_sum_rate_bps_hz = std::numeric_limits<double>::quiet_NaN();
                rec.outage = rvec::Constant(1, std::numeric_limits<double>::quiet_NaN());
                rec.per_trial_sum_rate.assign(spec.trials, std::numeric_limits<double>::quiet_NaN());
            }
            rec.sweep_value = value;
            rec.scenario = spec.scenarios[combos[ci].scenario].label();
            if (spec.variable == SweepVariable::EmiPower && has_emi(spec.scenarios[combos[ci].scenario].kind))
                rec.scenario = std::string(to_string(spec.scenarios[combos[ci].scenario].kind));
            rec.mode = combos[ci].mode;
            rec.wall_time_s = wall;
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

std::vector<SingleTrialRow> run_single_trial(const SystemConfig& cfg, const std::vector<ScenarioSpec>& scenarios,
                                             const std::vector<Mode>& modes, std::uint64_t seed,
                                             std::uint64_t trial, const AoOptions& ao, const RcgOptions& rcg,
                                             std::vector<TraceRow>* trace) {
    SystemConfig c = cfg;
    c.rng_seed = seed;
    const ScenarioModel model(std::move(c));
    std::vector<Combo> combos;
    int trace_combo = -1;
    for (std::size_t s = 0; s < scenarios.size(); ++s)
        for (Mode m : modes) {
            if (trace && trace_combo < 0 && m != Mode::FixedPhase) trace_combo = static_cast<int>(combos.size());
            combos.push_back({s, m});
        }
    TrialJob job{&model, &scenarios, &combos, std::nullopt, &ao, &rcg, trace_combo};
    const ChannelRealization real = draw_realization(model, trial);
    TrialRun run = run_trial(job, real);

    std::vector<SingleTrialRow> rows;
    for (std::size_t ci = 0; ci < combos.size(); ++ci)
        rows.push_back({scenarios[combos[ci].scenario].label(), combos[ci].mode, run.outcomes[ci], run.sinr[ci]});
    if (trace) *trace = std::move(run.trace);
    return rows;
}

void write_csv(std::ostream& out, const std::vector<MetricRecord>& records) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        const double outage1 = r.outage.size() > 0 ? r.outage(0) : std::numeric_limits<double>::quiet_NaN();
        out << format_number(r.sweep_value) << ',' << r.scenario << ',' << to_string(r.mode) << ','
            << format_number(r.mean_sum_rate_bps_hz) << ',' << format_number(outage1) << ',' << r.trials << ','
            << r.skipped << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    out << "trial,outer_iter,inner_iter,objective,grad_norm,step\n";
    for (const auto& r : rows)
        out << r.trial << ',' << r.outer_iter << ',' << r.inner_iter << ',' << format_number(r.objective) << ','
            << format_number(r.grad_norm) << ',' << format_number(r.step) << '\n';
}

}  // namespace risemi
