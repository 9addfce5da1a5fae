#pragma once

#include <string>
#include <vector>

#include "risbt/analytic.hpp"
#include "risbt/scenario.hpp"

namespace risbt {

enum class Strategy { FullSearch, Hierarchical, Tracking };

const char* to_string(Strategy s);

/// Per-strategy training structure: trained codeword counts and pilot
/// counts per level. FS and TS are single-level over the top codebook; TS
/// scans the 8-neighborhood regardless of the codebook size.
struct StrategyParams {
    Strategy kind = Strategy::FullSearch;
    int levels = 1;                   // L
    int root_size = 0;                // M0 (HS level-1 codebook size)
    int branching = 0;                // k (HS)
    int top_size = 0;                 // M_L
    std::vector<int> trained_counts;  // M~_l, one per level
    std::vector<int> pilot_counts;    // N_l, one per level

    static StrategyParams full_search(int top_size, int pilots);
    static StrategyParams tracking(int top_size, int pilots);
    static StrategyParams hierarchical(int root_size, int branching, int levels,
                                       std::vector<int> pilots);

    int trained_total() const;  // M_HS for HS, M_L for FS, 8 for TS
};

/// T_t split into its additive parts.
struct OverheadBreakdown {
    Strategy kind = Strategy::FullSearch;
    double response = 0.0;  // tau * (1 + sum M~_l)
    double feedback = 0.0;  // L * delta
    double pilots = 0.0;    // T_p * sum N_l M~_l

    double total() const { return response + feedback + pilots; }
};

OverheadBreakdown training_overhead(const StrategyParams& sp, const TimingConfig& tc);

/// Eq.-style accounting for an arbitrary level structure; used internally
/// by training_overhead and exposed for degenerate-case checks.
OverheadBreakdown general_training_overhead(double response_time, double feedback_delay,
                                            double pilot_duration,
                                            const std::vector<int>& trained_counts,
                                            const std::vector<int>& pilot_counts);

struct FrameTiming {
    double frame = 0.0;       // T_f [s]
    double subframe = 0.0;    // T_sf [s]
    double path_const = 0.0;  // C [m], C / M_L = shortest subarea diagonal
};

/// Frame and subframe durations for the top-level grid. v = 0 yields an
/// infinite frame (zero-overhead limit for the caller).
FrameTiming frame_durations(const TimingConfig& tc, double wavelength,
                            const SubareaGrid& top_grid);

struct OverallOverhead {
    double sigma = 0.0;          // clamped to [0, 1]
    double sigma_raw = 0.0;      // unclamped quadratic value
    double estimation = 0.0;     // eps_e
    bool infeasible = false;     // frame too short for training + estimation
};

OverallOverhead overall_overhead(double training_time, const TimingConfig& tc,
                                 double wavelength, const SubareaGrid& top_grid);

/// sigma(v) = (a + b) v - a b v^2.
struct ParabolaCoeffs {
    double a = 0.0;  // M_L T_t / (alpha C) [s/m]
    double b = 0.0;  // T_e 4 sqrt(pi) / (3 lambda) [s/m]

    double eval(double v) const { return (a + b) * v - a * b * v * v; }
    double slope(double v) const { return a + b - 2.0 * a * b * v; }
    double vertex_velocity() const { return (a + b) / (2.0 * a * b); }
    double peak() const { return (a + b) * (a + b) / (4.0 * a * b); }
};

ParabolaCoeffs parabola_coeffs(double training_time, const TimingConfig& tc,
                               double wavelength, const SubareaGrid& top_grid);

/// Largest velocity with sigma(v) <= threshold (the smaller root).
double velocity_bound(const ParabolaCoeffs& coeffs, double threshold);

struct GeneralVelocityBound {
    double training_bound = 0.0;  // T_bound [s]
    double velocity = 0.0;        // v_bar [m/s]
    ParabolaCoeffs coeffs;
};

/// Strategy-independent bound: T_bound covers FS, HS, and TS training
/// overheads; requires root_size > 8 and branching >= 2.
GeneralVelocityBound overhead_upper_bound(const TimingConfig& tc, double wavelength,
                                          const SubareaGrid& top_grid, int root_size,
                                          int branching, int levels, int top_pilots,
                                          double threshold);

/// Feedback delay above which FS yields a lower overhead than HS.
double feedback_delay_bound(const StrategyParams& hs, const TimingConfig& tc);

/// Per-level pilot counts from the minimum training SNR and the per-level
/// achievable-SNR laws (transition levels use the conservative bound).
std::vector<int> resolve_pilot_counts(double min_snr, const std::vector<ScalingLaw>& laws);

}  // namespace risbt
