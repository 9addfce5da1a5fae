#include "risbt/overhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace risbt {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::FullSearch: return "fs";
        case Strategy::Hierarchical: return "hs";
        case Strategy::Tracking: return "ts";
    }
    return "?";
}

StrategyParams StrategyParams::full_search(int top_size, int pilots) {
    if (top_size < 1) throw std::invalid_argument("full_search: empty codebook");
    if (pilots < 1) throw std::invalid_argument("full_search: pilots must be >= 1");
    StrategyParams sp;
    sp.kind = Strategy::FullSearch;
    sp.levels = 1;
    sp.root_size = top_size;
    sp.top_size = top_size;
    sp.trained_counts = {top_size};
    sp.pilot_counts = {pilots};
    return sp;
}

StrategyParams StrategyParams::tracking(int top_size, int pilots) {
    if (top_size <= 8)
        throw std::invalid_argument("tracking: requires a codebook larger than 8");
    if (pilots < 1) throw std::invalid_argument("tracking: pilots must be >= 1");
    StrategyParams sp;
    sp.kind = Strategy::Tracking;
    sp.levels = 1;
    sp.root_size = top_size;
    sp.top_size = top_size;
    sp.trained_counts = {8};
    sp.pilot_counts = {pilots};
    return sp;
}

StrategyParams StrategyParams::hierarchical(int root_size, int branching, int levels,
                                            std::vector<int> pilots) {
    if (levels <= 1) throw std::invalid_argument("hierarchical: requires L > 1");
    if (branching <= 1) throw std::invalid_argument("hierarchical: requires k > 1");
    if (root_size <= branching)
        throw std::invalid_argument("hierarchical: requires M0 > k");
    if (static_cast<int>(pilots.size()) != levels)
        throw std::invalid_argument("hierarchical: one pilot count per level required");
    for (int n : pilots)
        if (n < 1) throw std::invalid_argument("hierarchical: pilots must be >= 1");

    StrategyParams sp;
    sp.kind = Strategy::Hierarchical;
    sp.levels = levels;
    sp.root_size = root_size;
    sp.branching = branching;
    sp.top_size = root_size;
    for (int l = 1; l < levels; ++l) sp.top_size *= branching;
    sp.trained_counts.assign(static_cast<size_t>(levels), branching);
    sp.trained_counts[0] = root_size;
    sp.pilot_counts = std::move(pilots);
    return sp;
}

int StrategyParams::trained_total() const {
    return std::accumulate(trained_counts.begin(), trained_counts.end(), 0);
}

OverheadBreakdown general_training_overhead(double response_time, double feedback_delay,
                                            double pilot_duration,
                                            const std::vector<int>& trained_counts,
                                            const std::vector<int>& pilot_counts) {
    if (trained_counts.size() != pilot_counts.size())
        throw std::invalid_argument("training_overhead: counts size mismatch");
    const int total =
        std::accumulate(trained_counts.begin(), trained_counts.end(), 0);
    OverheadBreakdown b;
    b.response = response_time * (1.0 + total);
    b.feedback = feedback_delay * static_cast<double>(trained_counts.size());
    double chi = 0.0;
    for (size_t l = 0; l < trained_counts.size(); ++l)
        chi += static_cast<double>(pilot_counts[l]) * trained_counts[l];
    b.pilots = pilot_duration * chi;
    return b;
}

OverheadBreakdown training_overhead(const StrategyParams& sp, const TimingConfig& tc) {
    OverheadBreakdown b =
        general_training_overhead(tc.ris_response_time, tc.feedback_delay,
                                  tc.pilot_symbol_duration, sp.trained_counts,
                                  sp.pilot_counts);
    b.kind = sp.kind;
    return b;
}

FrameTiming frame_durations(const TimingConfig& tc, double wavelength,
                            const SubareaGrid& top_grid) {
    FrameTiming t;
    const double wy = top_grid.extent_y * top_grid.count_x;
    const double wz = top_grid.extent_z * top_grid.count_y;
    t.path_const = std::sqrt(wy * wy + wz * wz);
    if (tc.user_velocity <= 0.0) {
        t.frame = std::numeric_limits<double>::infinity();
        t.subframe = std::numeric_limits<double>::infinity();
        return t;
    }
    t.frame = tc.frame_factor * t.path_const / (tc.user_velocity * top_grid.size());
    t.subframe = std::sqrt(9.0 / (16.0 * M_PI)) * wavelength / tc.user_velocity;
    return t;
}

OverallOverhead overall_overhead(double training_time, const TimingConfig& tc,
                                 double wavelength, const SubareaGrid& top_grid) {
    if (training_time < 0.0)
        throw std::invalid_argument("overall_overhead: negative training time");

    OverallOverhead o;
    const double v = tc.user_velocity;
    if (v <= 0.0) return o;  // infinite frame, zero overhead

    const FrameTiming ft = frame_durations(tc, wavelength, top_grid);
    o.estimation =
        tc.channel_estimation_overhead * 4.0 * std::sqrt(M_PI) * v / (3.0 * wavelength);
    const double beta =
        v * (1.0 - o.estimation) / (tc.frame_factor * ft.path_const);
    o.sigma_raw = beta * top_grid.size() * training_time + o.estimation;
    o.sigma = std::clamp(o.sigma_raw, 0.0, 1.0);
    o.infeasible = ft.frame <= training_time + tc.channel_estimation_overhead;
    return o;
}

ParabolaCoeffs parabola_coeffs(double training_time, const TimingConfig& tc,
                               double wavelength, const SubareaGrid& top_grid) {
    if (training_time <= 0.0 || tc.channel_estimation_overhead <= 0.0)
        throw std::invalid_argument("parabola_coeffs: T_t and T_e must be > 0");
    const FrameTiming ft = frame_durations(tc, wavelength, top_grid);
    ParabolaCoeffs c;
    c.a = top_grid.size() * training_time / (tc.frame_factor * ft.path_const);
    c.b = tc.channel_estimation_overhead * 4.0 * std::sqrt(M_PI) / (3.0 * wavelength);
    return c;
}

double velocity_bound(const ParabolaCoeffs& coeffs, double threshold) {
    if (threshold < 0.0 || threshold >= 1.0)
        throw std::invalid_argument("velocity_bound: threshold must be in [0, 1)");
    const double s = coeffs.a + coeffs.b;
    const double p = coeffs.a * coeffs.b;
    const double disc = s * s - 4.0 * p * threshold;
    return (s - std::sqrt(disc)) / (2.0 * p);
}

GeneralVelocityBound overhead_upper_bound(const TimingConfig& tc, double wavelength,
                                          const SubareaGrid& top_grid, int root_size,
                                          int branching, int levels, int top_pilots,
                                          double threshold) {
    // multi-level families must satisfy the geometric-series conditions
    if (levels > 1) {
        if (root_size <= 8)
            throw std::invalid_argument("overhead_upper_bound: requires M0 > 8");
        if (branching < 2)
            throw std::invalid_argument("overhead_upper_bound: requires k >= 2");
    }
    if (top_pilots < 1)
        throw std::invalid_argument("overhead_upper_bound: pilots must be >= 1");

    const double m_top = static_cast<double>(top_grid.size());
    GeneralVelocityBound g;
    g.training_bound = 1.25 * top_pilots * m_top * tc.pilot_symbol_duration +
                       (1.0 + m_top) * tc.ris_response_time +
                       levels * tc.feedback_delay;
    g.coeffs = parabola_coeffs(g.training_bound, tc, wavelength, top_grid);
    g.velocity = velocity_bound(g.coeffs, threshold);
    return g;
}

double feedback_delay_bound(const StrategyParams& hs, const TimingConfig& tc) {
    if (hs.kind != Strategy::Hierarchical || hs.levels <= 1)
        throw std::invalid_argument("feedback_delay_bound: HS params with L > 1 required");
    const double diff = hs.top_size - hs.trained_total();
    const double per_codeword =
        tc.ris_response_time + tc.pilot_symbol_duration * hs.pilot_counts.back();
    return diff / (hs.levels - 1) * per_codeword;
}

std::vector<int> resolve_pilot_counts(double min_snr, const std::vector<ScalingLaw>& laws) {
    std::vector<int> counts;
    counts.reserve(laws.size());
    for (const ScalingLaw& law : laws) {
        const double snr = law.regime == SnrRegime::Transition ? law.conservative_value()
                                                               : law.point_value();
        counts.push_back(min_pilots(min_snr, snr).count);
    }
    return counts;
}

}  // namespace risbt
