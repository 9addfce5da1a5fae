#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risbt/config_io.hpp"
#include "risbt/simulator.hpp"

namespace risbt {

/// Batch experiment description. Presets pin every non-swept parameter to
/// the reference scenario; `trials` scales the Monte-Carlo sample count.
struct ExperimentSpec {
    std::string preset = "custom";
    Scenario scenario = default_scenario();
    std::vector<Strategy> strategies{Strategy::FullSearch, Strategy::Hierarchical,
                                     Strategy::Tracking};
    int trials = 0;  // 0 = preset default
    uint64_t master_seed = 1;
    std::string out_dir = "out";
    bool strict = false;
    int workers = 1;
    bool traces = false;
    std::string sweep_key;  // custom preset only
    std::vector<double> sweep_values;
};

std::vector<std::string> preset_names();

/// One evaluated acceptance check.
struct CriterionResult {
    std::string id;
    std::string description;
    double measured = 0.0;
    double bound = 0.0;
    std::string comparison;  // "<=", ">=", "within"
    bool pass = false;
};

struct PresetOutput {
    std::vector<std::string> files;
    std::vector<CriterionResult> criteria;
    bool infeasible_frames = false;
};

PresetOutput run_preset(const ExperimentSpec& spec);

/// Acceptance checks; trial counts below the listed minimums are widened
/// into the same checks on fewer samples (used by fast preset runs).
std::vector<CriterionResult> check_snr_scaling(const Scenario& sc, int draws, uint64_t seed,
                                               int workers = 1);
std::vector<CriterionResult> check_regime_classifier(const Scenario& sc);
std::vector<CriterionResult> check_overhead_parabola(uint64_t seed, int trials = 1000);
std::vector<CriterionResult> check_velocity_bounds(const Scenario& sc);
std::vector<CriterionResult> check_delay_crossover_analytic(const Scenario& sc);
std::vector<CriterionResult> check_delay_crossover_simulated(const Scenario& sc, int draws,
                                                             uint64_t seed, int workers = 1);
std::vector<CriterionResult> check_reliability_regimes(const Scenario& sc, int frames,
                                                       uint64_t seed, int workers = 1);
std::vector<CriterionResult> check_strategy_ordering(const Scenario& sc);
std::vector<CriterionResult> check_appendix_bounds(const Scenario& sc, uint64_t seed,
                                                   int trials = 1000);

void write_report(const std::vector<CriterionResult>& criteria, std::ostream& out);

/// Maintenance tool: reliability-driven feasible interval for the minimum
/// training SNR, with a recommended value (geometric mean of the interval).
struct CalibrationResult {
    double lower = 0.0;   // below this, some level needing N = 1 breaks
    double upper = 0.0;   // above this, IOR would need N > 1 where N = 1 works
    double recommended = 0.0;
    std::vector<int> empirical_pilots;  // smallest reliable N per level
};

CalibrationResult calibrate_min_training_snr(const Scenario& sc, int frames, uint64_t seed,
                                             int workers = 1);

}  // namespace risbt
