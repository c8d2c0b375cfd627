#pragma once

#include "risemi/ao.hpp"
#include "risemi/channel.hpp"
#include "risemi/scenario.hpp"
#include "risemi/sinr.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace risemi {

enum class SweepVariable { TxPower, RisElements, EmiPower };
enum class Mode { FixedPhase, OptimizedUnaware, OptimizedAware };

std::string_view to_string(SweepVariable v);
std::string_view to_string(Mode m);
Mode parse_mode(std::string_view name);

/// A scenario plus an optional EMI level, written "EMI@-75" / "EMI_IRR@-65".
struct ScenarioSpec {
    Scenario kind = Scenario::Eif;
    std::optional<double> emi_dbm;

    [[nodiscard]] std::string label() const;
    static ScenarioSpec parse(std::string_view text);
};

/// The six fixed-phase curves: EIF, EMI@-75, EMI@-65, IRR, EMI_IRR@-75, EMI_IRR@-65.
std::vector<ScenarioSpec> standard_scenarios();

struct SweepSpec {
    SweepVariable variable = SweepVariable::TxPower;
    std::vector<double> grid;
    std::vector<ScenarioSpec> scenarios;
    std::vector<Mode> modes{Mode::FixedPhase};
    int trials = 500;
    std::uint64_t seed = 7;
    AoOptions ao{};
    RcgOptions rcg = default_inner_rcg_options();
    unsigned threads = 0;  // 0 = hardware concurrency
    bool collect_trace = false;
    std::optional<std::filesystem::path> dump_channels;  // trial 0 of the first grid point
};

/// Outcome of one trial for one (scenario, mode) pair.
struct TrialOutcome {
    bool skipped = false;
    double sum_rate_bps_hz = 0.0;
    rvec rates;
};

struct MetricRecord {
    double sweep_value = 0.0;
    std::string scenario;
    Mode mode = Mode::FixedPhase;
    double mean_sum_rate_bps_hz = 0.0;
    double sum_rate_std_error = 0.0;
    rvec outage;  // per user
    int trials = 0;
    int skipped = 0;
    double wall_time_s = 0.0;
    bool valid = false;
    /// Sum rate of every trial in trial order; NaN where skipped.
    std::vector<double> per_trial_sum_rate;
};

/// Mean sum rate and empirical outage over the non-skipped outcomes. Throws
/// std::runtime_error when every outcome was skipped.
MetricRecord aggregate(const std::vector<TrialOutcome>& outcomes, double rate_threshold_bps_hz);

struct TraceRow {
    std::uint64_t trial = 0;
    int outer_iter = 0;
    int inner_iter = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

struct SweepResult {
    std::vector<MetricRecord> records;
    std::vector<TraceRow> trace;
};

/// Monte Carlo over every grid point x scenario x mode. Deterministic given
/// (spec, cfg): trial t always uses the stream derived from (seed, t), the
/// same realization across scenarios and modes.
SweepResult run_sweep(const SweepSpec& spec, const SystemConfig& cfg);

/// Config with the sweep variable applied at one grid value.
SystemConfig apply_sweep_value(const SystemConfig& cfg, SweepVariable v, double value);

/// EMI levels a scenario imposes, falling back to the config's per-cluster values.
EmiLevels emi_levels_for(const ScenarioSpec& s, const SystemConfig& validated_cfg,
                         std::optional<double> sweep_emi_dbm = std::nullopt);

struct SingleTrialRow {
    std::string scenario;
    Mode mode = Mode::FixedPhase;
    TrialOutcome outcome;
    rvec sinr;
};

std::vector<SingleTrialRow> run_single_trial(const SystemConfig& cfg, const std::vector<ScenarioSpec>& scenarios,
                                             const std::vector<Mode>& modes, std::uint64_t seed,
                                             std::uint64_t trial, const AoOptions& ao, const RcgOptions& rcg,
                                             std::vector<TraceRow>* trace = nullptr);

inline constexpr std::string_view kCsvHeader =
    "sweep_value,scenario,mode,mean_sum_rate_bps_hz,outage_user1,trials,skipped";

void write_csv(std::ostream& out, const std::vector<MetricRecord>& records);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

}  // namespace risemi
