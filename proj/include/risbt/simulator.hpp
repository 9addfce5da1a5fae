#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "risbt/codebook.hpp"
#include "risbt/config_io.hpp"
#include "risbt/mobility.hpp"
#include "risbt/overhead.hpp"

namespace risbt {

/// Per-frame channel state folded to the quantity the matched filter sees:
/// h_m^H f = unit_cell * ex_m^T W ey_m with W = conj(h_r) o (H_i f)
/// reshaped side x side.
struct ChannelProjection {
    Eigen::MatrixXcd w;
    std::complex<double> unit_cell;
};

ChannelProjection make_projection(const SystemConfig& cfg, const ChannelRealization& ch,
                                  const Eigen::VectorXcd& precoder);

std::complex<double> codeword_gain(const ChannelProjection& proj, const Codeword& cw);

/// End-to-end gains of a whole level codebook against one projection.
Eigen::VectorXcd codebook_gains(const ChannelProjection& proj, const LevelCodebook& level);

enum class PilotMode { Resolved, Fixed };

struct SimOptions {
    PilotMode pilot_mode = PilotMode::Resolved;
    int fixed_pilots = 8;          // used when pilot_mode == Fixed
    bool noiseless = false;        // drop receiver noise in the matched filter
    bool genie_selection = false;  // force optimal codeword selection
    bool compute_genie = true;     // evaluate the codebook-optimal benchmark
    bool ts_reinit_full_search = false;  // re-init TS when tracking stalls
    bool pure_los = false;         // disable NLoS components
    int max_frames = 200;
    int draws_per_frame = 1;
    uint64_t master_seed = 1;
    int workers = 1;
};

struct TrainingOutcome {
    int selected = -1;            // index into the candidate list
    Eigen::VectorXd filtered;     // |s^H y_m|^2 per candidate
};

/// Matched-filter codeword selection over `candidates` (indices into the
/// level codebook). Noise is redrawn per codeword.
TrainingOutcome simulate_training_level(const SystemConfig& cfg, const ChannelProjection& proj,
                                        const LevelCodebook& level,
                                        const std::vector<int>& candidates, int num_pilots,
                                        Rng& rng, bool noiseless = false);

struct FrameResult {
    int frame_index = 0;
    Vec3 user_position;
    Strategy strategy = Strategy::FullSearch;
    int selected = -1;       // m* in the top-level codebook
    int genie_selected = -1; // codebook-optimal m
    double data_snr = 0.0;        // gamma_d
    double genie_snr = 0.0;       // gamma_d^cb
    double focusing_snr = 0.0;    // narrow beam at the exact user location
    double training_time = 0.0;   // T_t
    double sigma = 0.0;
    bool infeasible = false;
    bool tracking_init = false;   // TS frame that fell back to full search
    bool tracking_lost = false;   // TS scan peak below the training threshold
    std::vector<int> level_selections;  // HS: per-level m*
};

struct RunSummary {
    Strategy strategy = Strategy::FullSearch;
    double effective_rate = 0.0;   // mean (1 - sigma) log2(1 + gamma_d)
    double raw_rate = 0.0;         // mean log2(1 + gamma_d), no overhead discount
    double focusing_rate = 0.0;    // mean log2(1 + gamma_focus), zero overhead
    double mean_sigma = 0.0;
    double reliability = 0.0;      // mean gamma_d / gamma_d^cb
    double reliability_std_error = 0.0;
    double mean_data_snr = 0.0;    // linear average of gamma_d
    double snr_std_error = 0.0;
    double mean_genie_snr = 0.0;
    double mean_focus_snr = 0.0;
    double rate_std_error = 0.0;   // standard error of the per-sample rate
    int frames = 0;
    int samples = 0;
    int misselected = 0;           // samples with m* != genie m
    int infeasible_frames = 0;
    uint64_t master_seed = 0;
};

/// One beam-training frame of the given strategy at a fixed user position.
/// `previous_selection` carries the TS state; pilots per level are taken
/// from `pilot_counts` (one entry per level; FS/TS use the last).
FrameResult run_frame(const Scenario& sc, const HierarchicalCodebook& book, Strategy strategy,
                      const Vec3& user_position, const std::vector<int>& pilot_counts,
                      uint64_t channel_seed, const SimOptions& opt,
                      std::optional<int> previous_selection = std::nullopt);

/// Walks frames of duration T_f along the trajectory and aggregates the
/// effective ergodic rate over `draws_per_frame` realizations per frame.
RunSummary run_experiment(const Scenario& sc, const HierarchicalCodebook& book,
                          Strategy strategy, const Trajectory& trajectory,
                          const SimOptions& opt);

/// Per-level pilot counts for the scenario (resolved from the scaling laws
/// or fixed, per options).
std::vector<int> pilot_plan(const Scenario& sc, const HierarchicalCodebook& book,
                            const SimOptions& opt);

void write_frame_csv(const std::vector<FrameResult>& frames, std::ostream& out);

}  // namespace risbt
