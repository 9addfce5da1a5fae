#pragma once

#include "risbt/scenario.hpp"

namespace risbt {

// 3 dB half-power constant of the square-array broadside beam and the
// footprint prefactor 2 * 2.782 / pi it induces.
inline constexpr double kHalfPowerConstant = 2.782;
inline constexpr double kFootprintConstant = 1.77;

enum class SnrRegime { WideBeam, Transition, NarrowBeam };

const char* to_string(SnrRegime r);

/// Scaling-law prefactors: gamma* = wide_beam * Q * M_l in the wide-beam
/// regime and gamma* = narrow_beam * Q^2 in the narrow-beam regime.
struct SnrConstants {
    double wide_beam = 0.0;    // c_wb
    double narrow_beam = 0.0;  // c_nb
    // inputs kept for reporting
    double bs_ris_distance = 0.0;   // R_i
    double ris_user_distance = 0.0; // R_r
    double area_factor = 1.0;       // Gamma
    double unit_cell_gain = 0.0;    // |g~|
    double area = 0.0;              // |A|

    /// ris_user_distance defaults to the distance to the area center.
    static SnrConstants from_config(const SystemConfig& cfg, double ris_user_distance = 0.0);
};

struct RegimeReport {
    int level = 1;
    double rhs_wbr = 0.0;
    double rhs_nbr = 0.0;
    SnrRegime classification = SnrRegime::Transition;
    double margin_factor = 1.0;  // >= 1, ratio to the nearest class boundary
};

/// Minimum angular beam width of a narrow beam, 3 dB definition, broadside.
/// Valid for Q > 13 only.
double beam_width_exact(int num_unit_cells);
double beam_width_approx(int num_unit_cells);

struct FootprintDiameter {
    double exact = 0.0;
    double approx = 0.0;  // 1.77 * R / sqrt(Q)
};

FootprintDiameter footprint_diameter(double distance, int num_unit_cells);

/// Wide-/narrow-beam classification of one codebook level. strictness > 1
/// widens the transition band around the two boundary expressions.
RegimeReport classify_regime(const SystemConfig& cfg, const SubareaGrid& grid,
                             double strictness = 1.0);

/// Achievable-SNR scaling law for one level. In the transition regime the
/// wide- and narrow-beam values act as bounds rather than a point estimate.
struct ScalingLaw {
    SnrRegime regime = SnrRegime::Transition;
    double wide_beam_value = 0.0;    // c_wb * Q * M_l
    double narrow_beam_value = 0.0;  // c_nb * Q^2

    double point_value() const;         // defined value in WBR / NBR
    double conservative_value() const;  // min of the two bounds
};

ScalingLaw snr_scaling(const SystemConfig& cfg, const SubareaGrid& grid,
                       const SnrConstants& constants, SnrRegime regime);

/// Array-factor power gain |G|^2 of a square RIS steered at `steer` and
/// observed at `obs`. The removable sin/sin singularities are evaluated by
/// their sqrt(Q) per-axis limits.
double ris_gain_pattern(int num_unit_cells, const Aod& steer, const Aod& obs,
                        double spacing_x, double spacing_y, double wavelength,
                        double unit_cell_gain);

struct PilotRequirement {
    int count = 1;
    bool snr_dependent = false;  // false = IOR, true = DOR
};

/// Minimum pilot symbols for reliable training at one level. At least one
/// pilot is always required.
PilotRequirement min_pilots(double min_snr, double achievable_snr);

}  // namespace risbt
