#include "risbt/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "risbt/mobility.hpp"

namespace risbt {

namespace {

namespace fs = std::filesystem;

constexpr double kKmh = 1.0 / 3.6;
constexpr double kTrajectoryLength = 1000.0;

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class CsvFile {
  public:
    CsvFile(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write output file: " + path.string());
        out_ << header << "\n";
        path_ = path.string();
    }
    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) out_ << ",";
            out_ << format_double(v);
            first = false;
        }
        out_ << "\n";
    }
    void raw_row(const std::string& line) { out_ << line << "\n"; }
    const std::string& path() const { return path_; }

  private:
    std::ofstream out_;
    std::string path_;
};

HierarchicalCodebook single_level_book(const LevelCodebook& lc) {
    HierarchicalCodebook book;
    book.root_size = lc.size();
    book.branching = 0;
    book.levels.push_back(lc);
    return book;
}

Aod incident_aod(const Scenario& sc) { return aod_to_point(sc.system.bs_position); }

HierarchicalCodebook scenario_hierarchy(const Scenario& sc, int levels) {
    return build_hierarchy(sc.system, sc.codebook.root_size, sc.codebook.branching, levels,
                           incident_aod(sc), sc.strictness);
}

StrategyParams strategy_params(Strategy strategy, const HierarchicalCodebook& book,
                               const std::vector<int>& pilots) {
    switch (strategy) {
        case Strategy::FullSearch:
            return StrategyParams::full_search(book.top().size(), pilots.back());
        case Strategy::Tracking:
            return StrategyParams::tracking(book.top().size(), pilots.back());
        case Strategy::Hierarchical:
            return StrategyParams::hierarchical(book.root_size, book.branching,
                                                book.num_levels(), pilots);
    }
    throw std::invalid_argument("unknown strategy");
}

double strategy_sigma(Strategy strategy, const HierarchicalCodebook& book,
                      const std::vector<int>& pilots, const Scenario& sc,
                      const TimingConfig& tc, bool* infeasible = nullptr) {
    const double t_t = training_overhead(strategy_params(strategy, book, pilots), tc).total();
    const OverallOverhead oo =
        overall_overhead(t_t, tc, sc.system.wavelength, book.top().grid);
    if (infeasible && oo.infeasible) *infeasible = true;
    return oo.sigma;
}

/// (frames, draws_per_frame) giving at least `target` samples along the
/// trajectory.
std::pair<int, int> sample_plan(const Scenario& sc, const HierarchicalCodebook& book,
                                int target) {
    const FrameTiming ft =
        frame_durations(sc.timing, sc.system.wavelength, book.top().grid);
    const double step = sc.timing.user_velocity * ft.frame;
    int available = target;
    if (step > 0.0)
        available = std::max(1, static_cast<int>(kTrajectoryLength / step));
    const int frames = std::min(target, available);
    const int draws = (target + frames - 1) / frames;
    return {frames, draws};
}

RunSummary run_target(const Scenario& sc, const HierarchicalCodebook& book, Strategy strategy,
                      const Trajectory& traj, SimOptions opt, int target) {
    const auto [frames, draws] = sample_plan(sc, book, target);
    opt.max_frames = frames;
    opt.draws_per_frame = draws;
    return run_experiment(sc, book, strategy, traj, opt);
}

CriterionResult within(const std::string& id, const std::string& desc, double measured,
                       double reference, double rel_tol) {
    CriterionResult r;
    r.id = id;
    r.description = desc;
    r.measured = measured;
    r.bound = reference;
    r.comparison = "within " + format_double(rel_tol * 100.0) + "%";
    r.pass = std::abs(measured - reference) <= rel_tol * std::abs(reference);
    return r;
}

CriterionResult at_most(const std::string& id, const std::string& desc, double measured,
                        double bound) {
    CriterionResult r;
    r.id = id;
    r.description = desc;
    r.measured = measured;
    r.bound = bound;
    r.comparison = "<=";
    r.pass = measured <= bound;
    return r;
}

CriterionResult at_least(const std::string& id, const std::string& desc, double measured,
                         double bound) {
    CriterionResult r;
    r.id = id;
    r.description = desc;
    r.measured = measured;
    r.bound = bound;
    r.comparison = ">=";
    r.pass = measured >= bound;
    return r;
}

double db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig3_regimes",    "fig4_overhead_bound", "fig6_snr_vs_M",
            "fig7_reliability", "fig8_rate_vs_tau",    "fig8b_rate_vs_v",
            "fig9_rate_vs_delta", "custom"};
}

// ---------------------------------------------------------------------------
// acceptance checks
// ---------------------------------------------------------------------------

std::vector<CriterionResult> check_regime_classifier(const Scenario& sc) {
    auto [mx, my] = factorize_level(sc.codebook.root_size, sc.system.area_extent_y,
                                    sc.system.area_extent_z);
    const int split = static_cast<int>(std::lround(std::sqrt(double(sc.codebook.branching))));
    int wide_first_three = 0;
    bool narrow_last = false;
    for (int level = 1; level <= sc.codebook.levels; ++level) {
        SubareaGrid grid = partition_grid(sc.system, mx, my);
        grid.level = level;
        const RegimeReport rep = classify_regime(sc.system, grid, sc.strictness);
        if (level <= 3 && rep.classification == SnrRegime::WideBeam) ++wide_first_three;
        if (level == sc.codebook.levels)
            narrow_last = rep.classification == SnrRegime::NarrowBeam;
        mx *= split;
        my *= split;
    }
    std::vector<CriterionResult> out;
    out.push_back(at_least("2a", "regime classifier: levels 1-3 wide-beam",
                           wide_first_three, 3.0));
    out.push_back(at_least("2b", "regime classifier: top level narrow-beam",
                           narrow_last ? 1.0 : 0.0, 1.0));
    return out;
}

std::vector<CriterionResult> check_overhead_parabola(uint64_t seed, int trials) {
    Rng rng(seed);
    double max_rel_err = 0.0;
    double min_peak = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        SystemConfig cfg;
        cfg.area_extent_y = rng.uniform(20.0, 200.0);
        cfg.area_extent_z = rng.uniform(20.0, 200.0);
        cfg.wavelength = rng.uniform(0.005, 0.1);
        TimingConfig tc;
        tc.frame_factor = rng.uniform(0.05, 1.0);
        tc.channel_estimation_overhead = rng.uniform(1e-6, 1e-3);
        tc.user_velocity = 1.0;  // replaced per draw below

        const int mx = 1 << static_cast<int>(rng.uniform(0.0, 6.0));
        const int my = 1 << static_cast<int>(rng.uniform(0.0, 6.0));
        const SubareaGrid grid = partition_grid(cfg, mx, my);
        const double t_t = rng.uniform(1e-5, 1e-1);

        const ParabolaCoeffs pc = parabola_coeffs(t_t, tc, cfg.wavelength, grid);
        min_peak = std::min(min_peak, pc.peak());

        tc.user_velocity = rng.uniform(0.0, 1.2) * pc.vertex_velocity();
        const OverallOverhead oo = overall_overhead(t_t, tc, cfg.wavelength, grid);
        const double expected = pc.eval(tc.user_velocity);
        const double scale = std::max({std::abs(expected), std::abs(oo.sigma_raw), 1e-30});
        max_rel_err = std::max(max_rel_err, std::abs(oo.sigma_raw - expected) / scale);
    }
    std::vector<CriterionResult> out;
    out.push_back(at_most("3a", "overhead parabola: sigma(v) identity, max relative error",
                          max_rel_err, 1e-10));
    out.push_back(at_least("3b", "overhead parabola: minimum vertex value", min_peak,
                           1.0 - 1e-12));
    return out;
}

std::vector<CriterionResult> check_velocity_bounds(const Scenario& sc) {
    // M_L = 512 family with M0 = 32, k = 4, L = 3; N_max = 8, rho = 0.1.
    const auto [mx, my] = factorize_level(512, sc.system.area_extent_y, sc.system.area_extent_z);
    const SubareaGrid grid = partition_grid(sc.system, mx, my);

    TimingConfig tc = sc.timing;
    tc.pilot_symbol_duration = 1e-6;
    tc.feedback_delay = 1e-4;

    std::vector<CriterionResult> out;
    tc.ris_response_time = 1e-6;
    const GeneralVelocityBound fast =
        overhead_upper_bound(tc, sc.system.wavelength, grid, 32, 4, 3, 8, 0.1);
    out.push_back(within("4a", "velocity bound, tau = 1 us [km/h]",
                         fast.velocity / kKmh, 20.0, 0.10));

    tc.ris_response_time = 1e-3;
    const GeneralVelocityBound slow =
        overhead_upper_bound(tc, sc.system.wavelength, grid, 32, 4, 3, 8, 0.1);
    out.push_back(within("4b", "velocity bound, tau = 1 ms [km/h]",
                         slow.velocity / kKmh, 0.45, 0.10));
    return out;
}

namespace {

StrategyParams fig9_hs_params(int pilots_per_level) {
    return StrategyParams::hierarchical(8, 4, 4,
                                        std::vector<int>(4, pilots_per_level));
}

constexpr int kFig9Pilots = 4;

}  // namespace

std::vector<CriterionResult> check_delay_crossover_analytic(const Scenario& sc) {
    TimingConfig tc = sc.timing;
    tc.pilot_symbol_duration = 1e-6;

    std::vector<CriterionResult> out;
    tc.ris_response_time = 1e-6;
    out.push_back(within("5a", "feedback-delay bound, tau = 1 us [ms]",
                         feedback_delay_bound(fig9_hs_params(kFig9Pilots), tc) * 1e3, 0.9,
                         0.10));
    tc.ris_response_time = 30e-6;
    out.push_back(within("5b", "feedback-delay bound, tau = 30 us [ms]",
                         feedback_delay_bound(fig9_hs_params(kFig9Pilots), tc) * 1e3, 6.0,
                         0.10));
    return out;
}

std::vector<CriterionResult> check_delay_crossover_simulated(const Scenario& sc, int draws,
                                                             uint64_t seed, int workers) {
    Scenario run = sc;
    run.timing.user_velocity = 50.0 * kKmh;
    run.codebook.levels = 4;

    const HierarchicalCodebook book = scenario_hierarchy(run, 4);
    const std::vector<int> pilots(4, kFig9Pilots);
    const Trajectory traj =
        generate_trajectory(run.system, kTrajectoryLength, run.timing.user_velocity,
                            derive_seed(seed, 0x7157));

    SimOptions opt;
    opt.pilot_mode = PilotMode::Fixed;
    opt.fixed_pilots = kFig9Pilots;
    opt.compute_genie = false;
    opt.master_seed = seed;
    opt.workers = workers;

    const RunSummary fs_run =
        run_target(run, book, Strategy::FullSearch, traj, opt, draws);
    const RunSummary hs_run =
        run_target(run, book, Strategy::Hierarchical, traj, opt, draws);

    auto crossing = [&](double tau) {
        TimingConfig tc = run.timing;
        tc.ris_response_time = tau;
        auto gap = [&](double delta) {
            TimingConfig t = tc;
            t.feedback_delay = delta;
            const double s_fs = strategy_sigma(Strategy::FullSearch, book, pilots, run, t);
            const double s_hs = strategy_sigma(Strategy::Hierarchical, book, pilots, run, t);
            return (1.0 - s_fs) * fs_run.raw_rate - (1.0 - s_hs) * hs_run.raw_rate;
        };
        double lo = 1e-6, hi = 0.1;
        if (gap(lo) >= 0.0 || gap(hi) <= 0.0) return 0.0;  // no crossing in range
        for (int it = 0; it < 80; ++it) {
            const double mid = std::sqrt(lo * hi);
            (gap(mid) < 0.0 ? lo : hi) = mid;
        }
        return std::sqrt(lo * hi);
    };

    std::vector<CriterionResult> out;
    TimingConfig tc = run.timing;
    tc.ris_response_time = 1e-6;
    const double bound_fast = feedback_delay_bound(fig9_hs_params(kFig9Pilots), tc);
    out.push_back(within("5c", "simulated FS/HS rate crossover, tau = 1 us [ms]",
                         crossing(1e-6) * 1e3, bound_fast * 1e3, 0.25));
    tc.ris_response_time = 30e-6;
    const double bound_slow = feedback_delay_bound(fig9_hs_params(kFig9Pilots), tc);
    out.push_back(within("5d", "simulated FS/HS rate crossover, tau = 30 us [ms]",
                         crossing(30e-6) * 1e3, bound_slow * 1e3, 0.25));
    return out;
}

std::vector<CriterionResult> check_snr_scaling(const Scenario& sc, int draws, uint64_t seed,
                                               int workers) {
    const HierarchicalCodebook book = scenario_hierarchy(sc, sc.codebook.levels);
    const Trajectory traj = generate_trajectory(
        sc.system, kTrajectoryLength, sc.timing.user_velocity, derive_seed(seed, 0x6fa1));

    SimOptions opt;
    opt.pilot_mode = PilotMode::Resolved;
    opt.compute_genie = false;
    opt.master_seed = seed;
    opt.workers = workers;

    std::vector<double> sizes, snrs;
    double focus_top = 0.0, snr_top = 0.0, snr_prev = 0.0;
    for (int level = 0; level < book.num_levels(); ++level) {
        const HierarchicalCodebook flat = single_level_book(book.levels[level]);
        const RunSummary sum =
            run_target(sc, flat, Strategy::FullSearch, traj, opt, draws);
        sizes.push_back(flat.top().size());
        snrs.push_back(sum.mean_data_snr);
        if (level == book.num_levels() - 2) snr_prev = sum.mean_data_snr;
        if (level == book.num_levels() - 1) {
            snr_top = sum.mean_data_snr;
            focus_top = sum.mean_focus_snr;
        }
    }

    // least-squares log-log slope over the wide-beam points (M <= 128)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] > 128.5) continue;
        const double x = std::log10(sizes[i]);
        const double y = std::log10(snrs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    std::vector<CriterionResult> out;
    out.push_back(within("1a", "SNR scaling: log-log slope over wide-beam sizes", slope, 1.0,
                         0.15));
    out.push_back(at_most("1b", "SNR saturation: |gamma(2048) - gamma(512)| [dB]",
                          std::abs(db(snr_top) - db(snr_prev)), 1.0));
    out.push_back(at_most("1c", "SNR saturation: |gamma(2048) - focusing| [dB]",
                          std::abs(db(snr_top) - db(focus_top)), 1.0));
    return out;
}

std::vector<CriterionResult> check_reliability_regimes(const Scenario& sc, int frames,
                                                       uint64_t seed, int workers) {
    const HierarchicalCodebook book = scenario_hierarchy(sc, 4);
    const Trajectory traj = generate_trajectory(
        sc.system, kTrajectoryLength, sc.timing.user_velocity, derive_seed(seed, 0x5e17));

    SimOptions opt;
    opt.pilot_mode = PilotMode::Fixed;
    opt.compute_genie = true;
    opt.master_seed = seed;
    opt.workers = workers;

    auto reliability = [&](int level_index, int pilots) {
        opt.fixed_pilots = pilots;
        const HierarchicalCodebook flat = single_level_book(book.levels[level_index]);
        return run_target(sc, flat, Strategy::FullSearch, traj, opt, frames);
    };

    const RunSummary big = reliability(3, 1);    // M = 512, N = 1
    const RunSummary small = reliability(2, 1);  // M = 128, N = 1

    int crossing = 0;
    for (int pilots : {2, 3, 4, 6, 8, 12, 16}) {
        const RunSummary r = reliability(2, pilots);
        if (r.reliability > 0.9) {
            crossing = pilots;
            break;
        }
    }

    std::vector<CriterionResult> out;
    out.push_back(at_least("6a", "reliability(M=512, N=1), 95% lower bound",
                           big.reliability - 1.645 * big.reliability_std_error, 0.9));
    out.push_back(at_most("6b", "reliability(M=128, N=1), 95% upper bound",
                          small.reliability + 1.645 * small.reliability_std_error, 0.9));
    out.push_back(at_least("6c", "reliability(M=128) crosses 0.9 at pilot count",
                           crossing > 1 ? crossing : 0.0, 2.0));
    return out;
}

std::vector<CriterionResult> check_strategy_ordering(const Scenario& sc) {
    const auto [mx, my] =
        factorize_level(512, sc.system.area_extent_y, sc.system.area_extent_z);
    const SubareaGrid grid = partition_grid(sc.system, mx, my);

    auto sigma_raw = [&](const StrategyParams& sp, const TimingConfig& tc) {
        const double t_t = training_overhead(sp, tc).total();
        return overall_overhead(t_t, tc, sc.system.wavelength, grid).sigma_raw;
    };

    int violations = 0;
    int cases = 0;
    for (double tau : {1e-7, 1e-6, 1e-5, 3e-5, 1e-4, 1e-3}) {
        for (double v_kmh : {3.0, 50.0, 100.0}) {
            for (double delta : {1e-5, 1e-4, 1e-3, 1e-2}) {
                for (int pilots : {1, 4, 8}) {
                    TimingConfig tc = sc.timing;
                    tc.ris_response_time = tau;
                    tc.user_velocity = v_kmh * kKmh;
                    tc.feedback_delay = delta;
                    const double ts =
                        sigma_raw(StrategyParams::tracking(512, pilots), tc);
                    const double fs =
                        sigma_raw(StrategyParams::full_search(512, pilots), tc);
                    const double hs = sigma_raw(
                        StrategyParams::hierarchical(8, 4, 4, std::vector<int>(4, pilots)),
                        tc);
                    ++cases;
                    if (!(ts < fs)) ++violations;
                    if (!(ts < hs)) ++violations;
                }
            }
        }
    }
    std::vector<CriterionResult> out;
    out.push_back(at_most("7", "strategy ordering: sigma(TS) < sigma(FS), sigma(HS); "
                               "violations over " + std::to_string(cases) + " grid points",
                          violations, 0.0));
    return out;
}

std::vector<CriterionResult> check_appendix_bounds(const Scenario& sc, uint64_t seed,
                                                   int trials) {
    Rng rng(seed);
    int root_violations = 0;
    int bound_violations = 0;
    for (int t = 0; t < trials; ++t) {
        // (a) larger root of sigma(v) = rho leaves no time for data
        {
            SystemConfig cfg;
            cfg.area_extent_y = rng.uniform(20.0, 200.0);
            cfg.area_extent_z = rng.uniform(20.0, 200.0);
            cfg.wavelength = rng.uniform(0.005, 0.1);
            TimingConfig tc;
            tc.frame_factor = rng.uniform(0.05, 1.0);
            tc.channel_estimation_overhead = rng.uniform(1e-6, 1e-3);
            const int mx = 1 << static_cast<int>(rng.uniform(0.0, 6.0));
            const int my = 1 << static_cast<int>(rng.uniform(0.0, 6.0));
            const SubareaGrid grid = partition_grid(cfg, mx, my);
            const double t_t = rng.uniform(1e-5, 1e-1);
            const double rho = rng.uniform(0.01, 0.9);

            const ParabolaCoeffs pc = parabola_coeffs(t_t, tc, cfg.wavelength, grid);
            const double s = pc.a + pc.b, p = pc.a * pc.b;
            const double v_plus = (s + std::sqrt(s * s - 4.0 * p * rho)) / (2.0 * p);
            tc.user_velocity = v_plus;
            const FrameTiming ft = frame_durations(tc, cfg.wavelength, grid);
            if (ft.frame > (t_t + tc.channel_estimation_overhead) * (1.0 + 1e-9))
                ++root_violations;
        }
        // (b) T_bound dominates the per-strategy training overheads
        {
            TimingConfig tc;
            tc.ris_response_time = rng.uniform(1e-7, 1e-3);
            tc.feedback_delay = rng.uniform(1e-6, 1e-2);
            tc.pilot_symbol_duration = rng.uniform(1e-7, 1e-5);
            const int k = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
            const int levels = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
            const int root = 9 + static_cast<int>(rng.uniform(0.0, 24.0));
            const int n_top = 1 + static_cast<int>(rng.uniform(0.0, 8.0));

            int m_top = root;
            for (int l = 1; l < levels; ++l) m_top *= k;
            // pilots either follow the per-level relation N_l = k^(L-l) N_L
            // exactly or are ceiling-resolved from a random threshold
            std::vector<int> pilots(static_cast<size_t>(levels));
            const bool resolved = rng.uniform(0.0, 1.0) < 0.5;
            const double gamma_min = rng.uniform(0.5, 50.0);
            const double gamma_star_top = gamma_min / rng.uniform(0.2, 8.0);
            for (int l = 0; l < levels; ++l) {
                const double scale = std::pow(k, levels - 1 - l);
                pilots[static_cast<size_t>(l)] =
                    resolved
                        ? static_cast<int>(std::ceil(gamma_min * scale / gamma_star_top))
                        : n_top * static_cast<int>(scale);
            }
            const int pilots_top = pilots.back();

            const double t_fs =
                training_overhead(StrategyParams::full_search(m_top, pilots.back()), tc)
                    .total();
            const double t_ts =
                training_overhead(StrategyParams::tracking(m_top, pilots.back()), tc).total();
            const double t_hs =
                training_overhead(StrategyParams::hierarchical(root, k, levels, pilots), tc)
                    .total();
            const double t_bound = 1.25 * pilots_top * m_top * tc.pilot_symbol_duration +
                                   (1.0 + m_top) * tc.ris_response_time +
                                   levels * tc.feedback_delay;
            if (t_bound < std::max({t_fs, t_hs, t_ts}) * (1.0 - 1e-12)) ++bound_violations;
        }
    }

    // (c) pure-LoS narrow-beam SNR against the narrow-beam scaling law
    const Vec3 user = sc.system.area_center;
    RicianParams rp = RicianParams::for_user(sc.system, user);
    rp.k_incident = 1e12;
    rp.k_reflected = 1e12;
    rp.paths_incident = sc.channel.paths_incident;
    rp.paths_reflected = sc.channel.paths_reflected;
    const ChannelRealization ch = generate_channels(sc.system, rp, derive_seed(seed, 0xc0de));
    const Codeword cw = narrow_beam_codeword(sc.system, rp.reflected, rp.incident);
    const double gamma = snr_from_gain(
        sc.system, end_to_end_gain(ch, cw.reflection(sc.system), los_precoder(sc.system, rp)));
    const SnrConstants constants = SnrConstants::from_config(sc.system, user.norm());
    const double law = constants.narrow_beam * sc.system.num_unit_cells *
                       static_cast<double>(sc.system.num_unit_cells);

    std::vector<CriterionResult> out;
    out.push_back(at_most("8a", "feasibility at the larger overhead root: violations",
                          root_violations, 0.0));
    out.push_back(at_most("8b", "T_bound dominates FS/HS/TS overheads: violations",
                          bound_violations, 0.0));
    out.push_back(at_most("8c", "pure-LoS narrow-beam SNR vs scaling law [dB]",
                          std::abs(db(gamma) - db(law)), 0.5));
    return out;
}

CalibrationResult calibrate_min_training_snr(const Scenario& sc, int frames, uint64_t seed,
                                             int workers) {
    const HierarchicalCodebook book = scenario_hierarchy(sc, 4);
    const Trajectory traj = generate_trajectory(
        sc.system, kTrajectoryLength, sc.timing.user_velocity, derive_seed(seed, 0xca1b));
    const SnrConstants constants = SnrConstants::from_config(sc.system);

    SimOptions opt;
    opt.pilot_mode = PilotMode::Fixed;
    opt.compute_genie = true;
    opt.master_seed = seed;
    opt.workers = workers;

    CalibrationResult result;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    for (int level = 0; level < book.num_levels(); ++level) {
        const HierarchicalCodebook flat = single_level_book(book.levels[level]);
        int reliable = 0;
        for (int pilots : {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64}) {
            opt.fixed_pilots = pilots;
            const RunSummary sum =
                run_target(sc, flat, Strategy::FullSearch, traj, opt, frames);
            if (sum.reliability > 0.9) {
                reliable = pilots;
                break;
            }
        }
        result.empirical_pilots.push_back(reliable);
        if (reliable == 0) continue;
        const ScalingLaw law =
            snr_scaling(sc.system, book.levels[level].grid, constants,
                        book.levels[level].regime.classification);
        const double gamma_star = law.regime == SnrRegime::Transition
                                      ? law.conservative_value()
                                      : law.point_value();
        lower = std::max(lower, (reliable - 1) * gamma_star);
        upper = std::min(upper, reliable * gamma_star);
    }
    result.lower = lower;
    result.upper = upper;
    result.recommended = lower > 0.0 ? std::sqrt(lower * upper) : upper / 2.0;
    return result;
}

void write_report(const std::vector<CriterionResult>& criteria, std::ostream& out) {
    out << "{\n  \"criteria\": [\n";
    bool all_pass = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const CriterionResult& c = criteria[i];
        all_pass = all_pass && c.pass;
        out << "    {\"id\": \"" << c.id << "\", \"description\": \"" << c.description
            << "\", \"measured\": " << format_double(c.measured)
            << ", \"bound\": " << format_double(c.bound) << ", \"comparison\": \""
            << c.comparison << "\", \"pass\": " << (c.pass ? "true" : "false") << "}"
            << (i + 1 < criteria.size() ? "," : "") << "\n";
    }
    out << "  ],\n  \"passed\": " << (all_pass ? "true" : "false") << "\n}\n";
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

namespace {

struct PresetContext {
    const ExperimentSpec& spec;
    fs::path dir;
    PresetOutput out;

    CsvFile file(const std::string& name, const std::string& header) {
        CsvFile f(dir / name, header);
        out.files.push_back(f.path());
        return f;
    }
};

int preset_trials(const ExperimentSpec& spec, int fallback) {
    return spec.trials > 0 ? spec.trials : fallback;
}

void preset_fig3(PresetContext& ctx) {
    const Scenario& sc = ctx.spec.scenario;
    CsvFile csv = ctx.file("regimes.csv", "level,m_l,rhs_wbr,rhs_nbr,class,margin");
    auto [mx, my] = factorize_level(sc.codebook.root_size, sc.system.area_extent_y,
                                    sc.system.area_extent_z);
    const int split = static_cast<int>(std::lround(std::sqrt(double(sc.codebook.branching))));
    for (int level = 1; level <= sc.codebook.levels; ++level) {
        SubareaGrid grid = partition_grid(sc.system, mx, my);
        grid.level = level;
        const RegimeReport rep = classify_regime(sc.system, grid, sc.strictness);
        std::ostringstream row;
        row << level << "," << grid.size() << "," << format_double(rep.rhs_wbr) << ","
            << format_double(rep.rhs_nbr) << "," << to_string(rep.classification) << ","
            << format_double(rep.margin_factor);
        csv.raw_row(row.str());
        mx *= split;
        my *= split;
    }
    auto checks = check_regime_classifier(sc);
    ctx.out.criteria.insert(ctx.out.criteria.end(), checks.begin(), checks.end());
}

void preset_fig4(PresetContext& ctx) {
    const Scenario& sc = ctx.spec.scenario;
    struct Family {
        int m_top, root, k, levels;
    };
    const std::vector<Family> families{{8, 8, 0, 1}, {512, 32, 4, 3}, {2048, 32, 4, 4}};
    for (double tau : {1e-6, 1e-3}) {
        for (const Family& fam : families) {
            const auto [mx, my] =
                factorize_level(fam.m_top, sc.system.area_extent_y, sc.system.area_extent_z);
            const SubareaGrid grid = partition_grid(sc.system, mx, my);
            TimingConfig tc = sc.timing;
            tc.ris_response_time = tau;
            const GeneralVelocityBound bound = overhead_upper_bound(
                tc, sc.system.wavelength, grid, fam.root, fam.k, fam.levels, 8, 0.1);

            std::ostringstream name;
            name << "bound_m" << fam.m_top << "_tau" << format_double(tau) << ".csv";
            CsvFile csv = ctx.file(name.str(), "velocity_kmh,sigma_bound");
            for (int i = 0; i <= 120; ++i) {
                const double v = i * 30.0 / 120.0 * kKmh;
                const double sigma = std::clamp(bound.coeffs.eval(v), 0.0, 1.0);
                csv.row({v / kKmh, sigma});
            }
        }
    }
    auto checks = check_velocity_bounds(sc);
    ctx.out.criteria.insert(ctx.out.criteria.end(), checks.begin(), checks.end());
}

void preset_fig6(PresetContext& ctx) {
    const Scenario& sc = ctx.spec.scenario;
    const int trials = preset_trials(ctx.spec, 200);
    const HierarchicalCodebook book = scenario_hierarchy(sc, sc.codebook.levels);
    const Trajectory traj =
        generate_trajectory(sc.system, kTrajectoryLength, sc.timing.user_velocity,
                            derive_seed(ctx.spec.master_seed, 0x6fa1));

    SimOptions opt;
    opt.pilot_mode = PilotMode::Resolved;
    opt.compute_genie = false;
    opt.master_seed = ctx.spec.master_seed;
    opt.workers = ctx.spec.workers;

    CsvFile fs_csv = ctx.file("fs.csv", "m_l,gamma_data_db,ci_halfwidth_db");
    CsvFile focus_csv = ctx.file("focusing.csv", "m_l,gamma_focus_db,ci_halfwidth_db");
    for (int level = 0; level < book.num_levels(); ++level) {
        const HierarchicalCodebook flat = single_level_book(book.levels[level]);
        const RunSummary sum = run_target(sc, flat, Strategy::FullSearch, traj, opt, trials);
        ctx.out.infeasible_frames |= sum.infeasible_frames > 0;
        const double ci = 1.96 * sum.snr_std_error / (sum.mean_data_snr * std::log(10.0)) * 10.0;
        fs_csv.row({static_cast<double>(flat.top().size()), db(sum.mean_data_snr), ci});
        focus_csv.row({static_cast<double>(flat.top().size()), db(sum.mean_focus_snr), 0.0});
    }
}

void preset_fig7(PresetContext& ctx) {
    const Scenario& sc = ctx.spec.scenario;
    const int trials = preset_trials(ctx.spec, 400);
    const HierarchicalCodebook book = scenario_hierarchy(sc, 4);
    const Trajectory traj =
        generate_trajectory(sc.system, kTrajectoryLength, sc.timing.user_velocity,
                            derive_seed(ctx.spec.master_seed, 0x5e17));

    SimOptions opt;
    opt.pilot_mode = PilotMode::Fixed;
    opt.compute_genie = true;
    opt.master_seed = ctx.spec.master_seed;
    opt.workers = ctx.spec.workers;

    for (int level = 0; level < book.num_levels(); ++level) {
        const HierarchicalCodebook flat = single_level_book(book.levels[level]);
        std::ostringstream name;
        name << "reliability_m" << flat.top().size() << ".csv";
        CsvFile csv = ctx.file(name.str(), "pilots,reliability,ci_halfwidth");
        for (int pilots : {1, 2, 3, 4, 6, 8}) {
            opt.fixed_pilots = pilots;
            const RunSummary sum =
                run_target(sc, flat, Strategy::FullSearch, traj, opt, trials);
            ctx.out.infeasible_frames |= sum.infeasible_frames > 0;
            csv.row({static_cast<double>(pilots), sum.reliability,
                     1.96 * sum.reliability_std_error});
        }
    }
}

// Rate sweeps: the codeword selection does not depend on tau, delta, or v,
// so each strategy is simulated once and the overhead factor is re-applied
// analytically along the sweep.
void rate_sweep_preset(PresetContext& ctx, const std::string& sweep_name,
                       const std::vector<double>& sweep_values,
                       const std::vector<double>& curve_values,
                       const std::string& curve_name,
                       void (*apply)(TimingConfig&, double sweep, double curve),
                       double fixed_velocity_kmh, int fixed_pilots) {
    const int trials = preset_trials(ctx.spec, 100);
    Scenario sc = ctx.spec.scenario;
    if (fixed_velocity_kmh > 0.0) sc.timing.user_velocity = fixed_velocity_kmh * kKmh;

    const HierarchicalCodebook book = scenario_hierarchy(sc, 4);
    const std::vector<int> pilots(4, fixed_pilots);
    const Trajectory traj =
        generate_trajectory(sc.system, kTrajectoryLength, sc.timing.user_velocity,
                            derive_seed(ctx.spec.master_seed, 0x8a7e));

    SimOptions opt;
    opt.pilot_mode = PilotMode::Fixed;
    opt.fixed_pilots = fixed_pilots;
    opt.compute_genie = false;
    opt.master_seed = ctx.spec.master_seed;
    opt.workers = ctx.spec.workers;

    for (double curve : curve_values) {
        // velocity curves change the frame walk; re-simulate per curve value
        Scenario run = sc;
        TimingConfig probe = run.timing;
        apply(probe, sweep_values.front(), curve);
        run.timing.user_velocity = probe.user_velocity;

        std::vector<std::pair<Strategy, RunSummary>> base;
        for (Strategy s : ctx.spec.strategies) {
            base.emplace_back(s, run_target(run, book, s, traj, opt, trials));
            ctx.out.infeasible_frames |= base.back().second.infeasible_frames > 0;
        }

        for (const auto& [strategy, sum] : base) {
            std::ostringstream name;
            name << to_string(strategy) << "_" << curve_name << format_double(curve) << ".csv";
            CsvFile csv = ctx.file(name.str(), sweep_name + ",rate,ci_halfwidth");
            for (double value : sweep_values) {
                TimingConfig tc = run.timing;
                apply(tc, value, curve);
                bool infeasible = false;
                const double sigma =
                    strategy_sigma(strategy, book, pilots, run, tc, &infeasible);
                csv.row({value, (1.0 - sigma) * sum.raw_rate,
                         (1.0 - sigma) * 1.96 * sum.rate_std_error});
            }
        }
        // zero-overhead focusing reference
        std::ostringstream name;
        name << "focusing_" << curve_name << format_double(curve) << ".csv";
        CsvFile csv = ctx.file(name.str(), sweep_name + ",rate,ci_halfwidth");
        for (double value : sweep_values) {
            csv.row({value, base.front().second.focusing_rate, 0.0});
        }
    }
}

std::vector<double> log_grid(double lo, double hi, int steps) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1)));
    return out;
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
    return out;
}

void preset_custom(PresetContext& ctx) {
    const ExperimentSpec& spec = ctx.spec;
    if (spec.sweep_values.empty())
        throw std::invalid_argument("custom preset: empty sweep range");

    double TimingConfig::*field = nullptr;
    if (spec.sweep_key == "timing.user_velocity")
        field = &TimingConfig::user_velocity;
    else if (spec.sweep_key == "timing.ris_response_time")
        field = &TimingConfig::ris_response_time;
    else if (spec.sweep_key == "timing.feedback_delay")
        field = &TimingConfig::feedback_delay;
    else
        throw std::invalid_argument("custom preset: unsupported sweep key '" + spec.sweep_key +
                                    "'");

    const int trials = preset_trials(spec, 100);
    const HierarchicalCodebook book =
        scenario_hierarchy(spec.scenario, spec.scenario.codebook.levels);

    SimOptions opt;
    opt.pilot_mode = PilotMode::Resolved;
    opt.compute_genie = false;
    opt.master_seed = spec.master_seed;
    opt.workers = spec.workers;

    for (Strategy strategy : spec.strategies) {
        std::ostringstream name;
        name << to_string(strategy) << "_sweep.csv";
        CsvFile csv = ctx.file(name.str(), spec.sweep_key + ",rate,ci_halfwidth");
        for (double value : spec.sweep_values) {
            Scenario run = spec.scenario;
            run.timing.*field = value;
            const Trajectory traj =
                generate_trajectory(run.system, kTrajectoryLength, run.timing.user_velocity,
                                    derive_seed(spec.master_seed, 0xcafe));
            const RunSummary sum = run_target(run, book, strategy, traj, opt, trials);
            ctx.out.infeasible_frames |= sum.infeasible_frames > 0;
            csv.row({value, sum.effective_rate, 1.96 * sum.rate_std_error});
        }
    }
}

}  // namespace

PresetOutput run_preset(const ExperimentSpec& spec) {
    PresetContext ctx{spec, fs::path(spec.out_dir) / spec.preset, {}};
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + ctx.dir.string());

    if (spec.preset == "fig3_regimes") {
        preset_fig3(ctx);
    } else if (spec.preset == "fig4_overhead_bound") {
        preset_fig4(ctx);
    } else if (spec.preset == "fig6_snr_vs_M") {
        preset_fig6(ctx);
    } else if (spec.preset == "fig7_reliability") {
        preset_fig7(ctx);
    } else if (spec.preset == "fig8_rate_vs_tau") {
        rate_sweep_preset(
            ctx, "tau", log_grid(1e-7, 1e-3, 13), {3.0, 100.0}, "v",
            [](TimingConfig& tc, double sweep, double curve) {
                tc.ris_response_time = sweep;
                tc.user_velocity = curve * kKmh;
            },
            0.0, 8);
    } else if (spec.preset == "fig8b_rate_vs_v") {
        rate_sweep_preset(
            ctx, "velocity_kmh", linear_grid(3.0, 100.0, 12), {1e-6, 1e-3}, "tau",
            [](TimingConfig& tc, double sweep, double curve) {
                tc.user_velocity = sweep * kKmh;
                tc.ris_response_time = curve;
            },
            0.0, 8);
    } else if (spec.preset == "fig9_rate_vs_delta") {
        rate_sweep_preset(
            ctx, "delta", log_grid(3e-5, 1e-2, 11), {1e-6, 30e-6}, "tau",
            [](TimingConfig& tc, double sweep, double curve) {
                tc.feedback_delay = sweep;
                tc.ris_response_time = curve;
            },
            50.0, kFig9Pilots);
        auto checks = check_delay_crossover_analytic(spec.scenario);
        ctx.out.criteria.insert(ctx.out.criteria.end(), checks.begin(), checks.end());
    } else if (spec.preset == "custom") {
        preset_custom(ctx);
    } else {
        throw std::invalid_argument("unknown preset: " + spec.preset);
    }

    std::ofstream report(ctx.dir / "report.json");
    if (!report)
        throw std::runtime_error("cannot write report in " + ctx.dir.string());
    write_report(ctx.out.criteria, report);
    ctx.out.files.push_back((ctx.dir / "report.json").string());
    return ctx.out;
}

}  // namespace risbt
