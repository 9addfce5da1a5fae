#include "risbt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace risbt {

ChannelProjection make_projection(const SystemConfig& cfg, const ChannelRealization& ch,
                                  const Eigen::VectorXcd& precoder) {
    const int side = cfg.ris_side();
    const Eigen::VectorXcd through = ch.incident * precoder;
    ChannelProjection proj;
    proj.unit_cell = unit_cell_factor(cfg);
    proj.w.resize(side, side);
    for (int qy = 0; qy < side; ++qy)
        for (int qx = 0; qx < side; ++qx) {
            const int q = qx + side * qy;
            proj.w(qx, qy) = std::conj(ch.reflected(q)) * through(q);
        }
    return proj;
}

std::complex<double> codeword_gain(const ChannelProjection& proj, const Codeword& cw) {
    return proj.unit_cell * (cw.axis_x.transpose() * proj.w * cw.axis_y)(0, 0);
}

Eigen::VectorXcd codebook_gains(const ChannelProjection& proj, const LevelCodebook& level) {
    const Eigen::MatrixXcd v = proj.w * level.ey;              // side x M
    Eigen::VectorXcd gains = (level.ex.array() * v.array()).colwise().sum();
    return proj.unit_cell * gains;
}

TrainingOutcome simulate_training_level(const SystemConfig& cfg, const ChannelProjection& proj,
                                        const LevelCodebook& level,
                                        const std::vector<int>& candidates, int num_pilots,
                                        Rng& rng, bool noiseless) {
    if (candidates.empty())
        throw std::invalid_argument("simulate_training_level: empty candidate set");
    if (num_pilots < 1)
        throw std::invalid_argument("simulate_training_level: pilots must be >= 1");

    const double amp_scale =
        std::sqrt(cfg.rx_gain * cfg.tx_gain * cfg.tx_power) * num_pilots;
    const double noise_std = std::sqrt(cfg.noise_power() * num_pilots);

    TrainingOutcome out;
    out.filtered.resize(static_cast<Eigen::Index>(candidates.size()));
    double best = -1.0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        const std::complex<double> gain = codeword_gain(proj, level.words[candidates[i]]);
        std::complex<double> filtered = amp_scale * gain;
        if (!noiseless) filtered += noise_std * rng.complex_gaussian();
        const double power = std::norm(filtered);
        out.filtered(static_cast<Eigen::Index>(i)) = power;
        if (power > best) {
            best = power;
            out.selected = static_cast<int>(i);
        }
    }
    return out;
}

std::vector<int> pilot_plan(const Scenario& sc, const HierarchicalCodebook& book,
                            const SimOptions& opt) {
    std::vector<int> counts;
    if (opt.pilot_mode == PilotMode::Fixed) {
        counts.assign(book.levels.size(), opt.fixed_pilots);
        return counts;
    }
    const SnrConstants constants = SnrConstants::from_config(sc.system);
    std::vector<ScalingLaw> laws;
    laws.reserve(book.levels.size());
    for (const LevelCodebook& lc : book.levels)
        laws.push_back(snr_scaling(sc.system, lc.grid, constants, lc.regime.classification));
    return resolve_pilot_counts(sc.system.min_training_snr, laws);
}

namespace {

StrategyParams frame_strategy_params(Strategy strategy, const HierarchicalCodebook& book,
                                     const std::vector<int>& pilot_counts) {
    const int m_top = book.top().size();
    switch (strategy) {
        case Strategy::FullSearch:
            return StrategyParams::full_search(m_top, pilot_counts.back());
        case Strategy::Tracking:
            return StrategyParams::tracking(m_top, pilot_counts.back());
        case Strategy::Hierarchical:
            return StrategyParams::hierarchical(book.root_size, book.branching,
                                                book.num_levels(), pilot_counts);
    }
    throw std::invalid_argument("unknown strategy");
}

int argmax_power(const Eigen::VectorXcd& gains) {
    int best = 0;
    double best_power = std::norm(gains(0));
    for (Eigen::Index m = 1; m < gains.size(); ++m) {
        const double p = std::norm(gains(m));
        if (p > best_power) {
            best_power = p;
            best = static_cast<int>(m);
        }
    }
    return best;
}

}  // namespace

FrameResult run_frame(const Scenario& sc, const HierarchicalCodebook& book, Strategy strategy,
                      const Vec3& user_position, const std::vector<int>& pilot_counts,
                      uint64_t channel_seed, const SimOptions& opt,
                      std::optional<int> previous_selection) {
    const SystemConfig& cfg = sc.system;
    FrameResult fr;
    fr.strategy = strategy;
    fr.user_position = user_position;

    RicianParams rp;
    rp.k_incident = opt.pure_los ? 1e12 : sc.channel.k_incident;
    rp.k_reflected = opt.pure_los ? 1e12 : sc.channel.k_reflected;
    rp.paths_incident = sc.channel.paths_incident;
    rp.paths_reflected = sc.channel.paths_reflected;
    const RicianParams geo = RicianParams::for_user(cfg, user_position);
    rp.incident = geo.incident;
    rp.reflected = geo.reflected;
    rp.bs_departure = geo.bs_departure;
    rp.bs_ris_distance = geo.bs_ris_distance;
    rp.ris_user_distance = geo.ris_user_distance;

    const ChannelRealization ch = generate_channels(cfg, rp, channel_seed);
    const Eigen::VectorXcd precoder = los_precoder(cfg, rp);
    const ChannelProjection proj = make_projection(cfg, ch, precoder);
    Rng rng(derive_seed(channel_seed, 0xbea7));

    const LevelCodebook& top = book.top();
    Eigen::VectorXcd top_gains;
    if (opt.compute_genie || opt.genie_selection) {
        top_gains = codebook_gains(proj, top);
        fr.genie_selected = argmax_power(top_gains);
        fr.genie_snr = snr_from_gain(cfg, top_gains(fr.genie_selected));
    }

    // Focusing benchmark: narrow beam at the exact user location.
    {
        const Codeword focus = narrow_beam_codeword(cfg, rp.reflected, rp.incident);
        fr.focusing_snr = snr_from_gain(cfg, codeword_gain(proj, focus));
    }

    bool tracking_frame = strategy == Strategy::Tracking && previous_selection.has_value();
    if (strategy == Strategy::Tracking && !tracking_frame) fr.tracking_init = true;

    if (opt.genie_selection) {
        fr.selected = fr.genie_selected;
        if (strategy == Strategy::Hierarchical) {
            // genie descent: the selections a perfect tree walk would make
            fr.level_selections.assign(static_cast<size_t>(book.num_levels()), -1);
            fr.level_selections.back() = fr.selected;
        }
    } else if (strategy == Strategy::FullSearch ||
               (strategy == Strategy::Tracking && !tracking_frame)) {
        std::vector<int> all(static_cast<size_t>(top.size()));
        std::iota(all.begin(), all.end(), 0);
        const TrainingOutcome out = simulate_training_level(cfg, proj, top, all,
                                                            pilot_counts.back(), rng,
                                                            opt.noiseless);
        fr.selected = all[static_cast<size_t>(out.selected)];
    } else if (strategy == Strategy::Tracking) {
        // Scan set: 8 neighbors; the incumbent takes part in the contest
        // and wins ties, but adds no pilot overhead.
        std::vector<int> contest{*previous_selection};
        const std::vector<int> neighbors = ts_neighborhood(top.grid, *previous_selection);
        contest.insert(contest.end(), neighbors.begin(), neighbors.end());
        const TrainingOutcome out = simulate_training_level(cfg, proj, top, contest,
                                                            pilot_counts.back(), rng,
                                                            opt.noiseless);
        fr.selected = contest[static_cast<size_t>(out.selected)];
        // Tracking is lost when even the best scanned codeword misses the
        // reliable-training threshold.
        const double n_pilots = pilot_counts.back();
        const double filtered_snr =
            out.filtered.maxCoeff() / (cfg.noise_power() * n_pilots) - 1.0;
        fr.tracking_lost = filtered_snr < cfg.min_training_snr;
    } else {
        // hierarchical descent
        fr.level_selections.clear();
        std::vector<int> candidates(static_cast<size_t>(book.levels.front().size()));
        std::iota(candidates.begin(), candidates.end(), 0);
        int selection = -1;
        for (int level = 0; level < book.num_levels(); ++level) {
            const TrainingOutcome out =
                simulate_training_level(cfg, proj, book.levels[static_cast<size_t>(level)],
                                        candidates, pilot_counts[static_cast<size_t>(level)],
                                        rng, opt.noiseless);
            selection = candidates[static_cast<size_t>(out.selected)];
            fr.level_selections.push_back(selection);
            if (level + 1 < book.num_levels())
                candidates = book.children(level + 1, selection);
        }
        fr.selected = selection;
    }

    fr.data_snr = snr_from_gain(cfg, codeword_gain(proj, top.words[fr.selected]));

    const Strategy overhead_kind = fr.tracking_init ? Strategy::FullSearch : strategy;
    const StrategyParams sp = frame_strategy_params(overhead_kind, book, pilot_counts);
    fr.training_time = training_overhead(sp, sc.timing).total();
    const OverallOverhead oo =
        overall_overhead(fr.training_time, sc.timing, cfg.wavelength, top.grid);
    fr.sigma = oo.sigma;
    fr.infeasible = oo.infeasible;
    return fr;
}

RunSummary run_experiment(const Scenario& sc, const HierarchicalCodebook& book,
                          Strategy strategy, const Trajectory& trajectory,
                          const SimOptions& opt) {
    const SystemConfig& cfg = sc.system;
    const std::vector<int> pilots = pilot_plan(sc, book, opt);
    const FrameTiming ft = frame_durations(sc.timing, cfg.wavelength, book.top().grid);

    // Distance covered per frame; v cancels, so a zero-velocity user
    // simply stays at the trajectory start.
    const double step = sc.timing.user_velocity > 0.0
                            ? sc.timing.user_velocity * ft.frame
                            : 0.0;
    int frames = opt.max_frames;
    if (step > 0.0)
        frames = std::min(frames,
                          std::max(1, static_cast<int>(trajectory.total_length / step)));

    const int draws = std::max(1, opt.draws_per_frame);
    std::vector<FrameResult> results(static_cast<size_t>(frames) * draws);

    auto run_draw = [&](int draw) {
        std::optional<int> ts_state;
        for (int f = 0; f < frames; ++f) {
            const Vec3 pos = trajectory.position_at(std::min(f * step, trajectory.total_length));
            const uint64_t seed = derive_seed(opt.master_seed, static_cast<uint64_t>(f),
                                              static_cast<uint64_t>(draw));
            FrameResult fr =
                run_frame(sc, book, strategy, pos, pilots, seed, opt, ts_state);
            fr.frame_index = f;
            if (strategy == Strategy::Tracking) {
                if (opt.ts_reinit_full_search && fr.tracking_lost)
                    ts_state.reset();
                else
                    ts_state = fr.selected;
            }
            results[static_cast<size_t>(f) * draws + draw] = std::move(fr);
        }
    };

    const int workers = std::max(1, std::min(opt.workers, draws));
    if (workers == 1) {
        for (int d = 0; d < draws; ++d) run_draw(d);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&, t] {
                for (int d = t; d < draws; d += workers) run_draw(d);
            });
        for (auto& th : pool) th.join();
    }

    RunSummary sum;
    sum.strategy = strategy;
    sum.frames = frames;
    sum.samples = static_cast<int>(results.size());
    sum.master_seed = opt.master_seed;

    double rate = 0.0, rate2 = 0.0, focus = 0.0, sigma = 0.0;
    double rel = 0.0, rel2 = 0.0, snr = 0.0, snr2 = 0.0;
    double genie = 0.0, raw = 0.0, focus_snr = 0.0;
    for (const FrameResult& fr : results) {
        const double r = (1.0 - fr.sigma) * std::log2(1.0 + fr.data_snr);
        rate += r;
        rate2 += r * r;
        raw += std::log2(1.0 + fr.data_snr);
        focus += std::log2(1.0 + fr.focusing_snr);
        focus_snr += fr.focusing_snr;
        sigma += fr.sigma;
        snr += fr.data_snr;
        snr2 += fr.data_snr * fr.data_snr;
        genie += fr.genie_snr;
        if (fr.genie_snr > 0.0) {
            const double ratio = fr.data_snr / fr.genie_snr;
            rel += ratio;
            rel2 += ratio * ratio;
        }
        if (fr.genie_selected >= 0 && fr.selected != fr.genie_selected) ++sum.misselected;
        if (fr.infeasible) ++sum.infeasible_frames;
    }
    const double n = static_cast<double>(results.size());
    auto std_error = [n](double s, double s2) {
        const double mean = s / n;
        return std::sqrt(std::max(0.0, s2 / n - mean * mean) / n);
    };
    sum.effective_rate = rate / n;
    sum.raw_rate = raw / n;
    sum.focusing_rate = focus / n;
    sum.mean_sigma = sigma / n;
    sum.reliability = rel / n;
    sum.reliability_std_error = std_error(rel, rel2);
    sum.mean_data_snr = snr / n;
    sum.snr_std_error = std_error(snr, snr2);
    sum.mean_genie_snr = genie / n;
    sum.mean_focus_snr = focus_snr / n;
    sum.rate_std_error = std_error(rate, rate2);
    return sum;
}

void write_frame_csv(const std::vector<FrameResult>& frames, std::ostream& out) {
    out << "frame,strategy,y,z,selected,genie,data_snr,genie_snr,focusing_snr,"
           "training_time,sigma,infeasible\n";
    char buf[256];
    for (const FrameResult& fr : frames) {
        std::snprintf(buf, sizeof buf, "%d,%s,%.9g,%.9g,%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                      fr.frame_index, to_string(fr.strategy), fr.user_position.y,
                      fr.user_position.z, fr.selected, fr.genie_selected, fr.data_snr,
                      fr.genie_snr, fr.focusing_snr, fr.training_time, fr.sigma,
                      fr.infeasible ? 1 : 0);
        out << buf;
    }
}

}  // namespace risbt
