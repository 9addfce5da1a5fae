#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "risbt/presets.hpp"

namespace {

std::vector<risbt::Strategy> parse_strategies(const std::string& csv) {
    std::vector<risbt::Strategy> out;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token == "fs")
            out.push_back(risbt::Strategy::FullSearch);
        else if (token == "hs")
            out.push_back(risbt::Strategy::Hierarchical);
        else if (token == "ts")
            out.push_back(risbt::Strategy::Tracking);
        else
            throw CLI::ValidationError("--strategies", "unknown strategy '" + token + "'");
    }
    if (out.empty()) throw CLI::ValidationError("--strategies", "empty strategy list");
    return out;
}

// start:stop:steps[:log]
std::vector<double> parse_range(const std::string& range) {
    std::vector<std::string> parts;
    std::istringstream in(range);
    std::string token;
    while (std::getline(in, token, ':')) parts.push_back(token);
    if (parts.size() < 3 || parts.size() > 4)
        throw CLI::ValidationError("--sweep", "expected start:stop:steps[:log]");
    const double start = std::stod(parts[0]);
    const double stop = std::stod(parts[1]);
    const int steps = std::stoi(parts[2]);
    const bool log_scale = parts.size() == 4 && parts[3] == "log";
    if (steps < 1) throw CLI::ValidationError("--sweep", "steps must be >= 1");
    std::vector<double> values;
    for (int i = 0; i < steps; ++i) {
        const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
        values.push_back(log_scale ? start * std::pow(stop / start, t)
                                   : start + (stop - start) * t);
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS beam-training overhead/SNR tradeoff experiments"};

    std::string config_path;
    std::string preset;
    std::string sweep;
    std::string strategies = "fs,hs,ts";
    int trials = 0;
    uint64_t seed = 1;
    std::string out_dir = "out";
    bool strict = false;
    int workers = 1;
    bool validate_only = false;
    bool calibrate = false;
    std::string export_codebook_path;

    app.add_option("--config", config_path, "scenario config file (key = value)");
    app.add_option("--preset", preset, "experiment preset name");
    app.add_option("--sweep", sweep, "custom sweep: key=start:stop:steps[:log]");
    app.add_option("--strategies", strategies, "comma list of fs,hs,ts");
    app.add_option("--trials", trials, "Monte-Carlo samples per sweep point");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--strict", strict, "exit nonzero when any frame is infeasible");
    app.add_option("--workers", workers, "worker threads for channel draws");
    app.add_flag("--validate-only", validate_only, "validate the config and exit");
    app.add_flag("--calibrate", calibrate,
                 "calibrate training.min_snr against simulated reliability");
    app.add_option("--export-codebook", export_codebook_path,
                   "write the scenario codebook as CSV and exit");

    CLI11_PARSE(app, argc, argv);

    risbt::Scenario scenario = risbt::default_scenario();
    if (!config_path.empty()) {
        const risbt::ConfigResult result = risbt::load_scenario_file(config_path);
        if (!result.ok()) {
            std::cerr << "config errors:\n";
            for (const std::string& e : result.errors) std::cerr << "  " << e << "\n";
            return 2;
        }
        scenario = *result.scenario;
    }

    if (validate_only) {
        std::cout << risbt::describe_derived(scenario);
        return 0;
    }

    try {
        if (!export_codebook_path.empty()) {
            const risbt::HierarchicalCodebook book = risbt::build_hierarchy(
                scenario.system, scenario.codebook.root_size, scenario.codebook.branching,
                scenario.codebook.levels, risbt::aod_to_point(scenario.system.bs_position),
                scenario.strictness);
            std::ofstream out(export_codebook_path);
            if (!out) {
                std::cerr << "cannot write " << export_codebook_path << "\n";
                return 2;
            }
            risbt::write_codebook_csv(book, out);
            return 0;
        }

        if (calibrate) {
            const risbt::CalibrationResult cal = risbt::calibrate_min_training_snr(
                scenario, trials > 0 ? trials : 300, seed, workers);
            std::cout << "empirical pilot counts per level:";
            for (int n : cal.empirical_pilots) std::cout << " " << n;
            std::cout << "\nfeasible min_snr interval: (" << cal.lower << ", " << cal.upper
                      << "]\nrecommended training.min_snr = " << cal.recommended << "\n";
            return 0;
        }

        if (preset.empty()) {
            std::cerr << "no --preset given; available:";
            for (const std::string& p : risbt::preset_names()) std::cerr << " " << p;
            std::cerr << "\n";
            return 2;
        }

        risbt::ExperimentSpec spec;
        spec.preset = preset;
        spec.scenario = scenario;
        spec.strategies = parse_strategies(strategies);
        spec.trials = trials;
        spec.master_seed = seed;
        spec.out_dir = out_dir;
        spec.strict = strict;
        spec.workers = workers;
        if (!sweep.empty()) {
            const auto eq = sweep.find('=');
            if (eq == std::string::npos) {
                std::cerr << "--sweep expects key=start:stop:steps[:log]\n";
                return 2;
            }
            spec.sweep_key = sweep.substr(0, eq);
            spec.sweep_values = parse_range(sweep.substr(eq + 1));
        }

        const risbt::PresetOutput output = risbt::run_preset(spec);
        for (const std::string& f : output.files) std::cerr << "wrote " << f << "\n";
        for (const risbt::CriterionResult& c : output.criteria)
            std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ": " << c.description
                      << " (measured " << c.measured << ", bound " << c.bound << ")\n";
        if (strict && output.infeasible_frames) {
            std::cerr << "strict mode: infeasible frames encountered\n";
            return 3;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
