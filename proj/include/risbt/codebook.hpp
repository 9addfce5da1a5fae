#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "risbt/analytic.hpp"
#include "risbt/channel.hpp"
#include "risbt/scenario.hpp"

namespace risbt {

enum class BeamDesign { Narrow, Wide };

/// One phase-shift profile. The total per-cell phase is separable,
/// psi_q = phase_x[qx] + phase_y[qy] with q = qx + side * qy; axis_x/axis_y
/// hold the unit phasors of the two components.
struct Codeword {
    int level = 1;
    int index_x = 1;  // m_x (z direction), 1-based
    int index_y = 1;  // m_y (y direction), 1-based
    BeamDesign design = BeamDesign::Narrow;
    Eigen::VectorXcd axis_x;  // length side
    Eigen::VectorXcd axis_y;
    Vec3 target_center;
    double target_half_y = 0.0;
    double target_half_z = 0.0;
    double curvature_x = 0.0;  // quadratic-profile curvature [1/m]
    double curvature_y = 0.0;

    /// Flat psi vector of length Q, each in [0, 2pi).
    Eigen::VectorXd phases() const;
    RisReflection reflection(const SystemConfig& cfg) const;
};

/// Codebook of one level, backed by a subarea grid. ex/ey stack the axis
/// phasors column-wise for batched gain evaluation.
struct LevelCodebook {
    SubareaGrid grid;
    RegimeReport regime;
    std::vector<Codeword> words;
    Eigen::MatrixXcd ex;  // side x M
    Eigen::MatrixXcd ey;

    int size() const { return static_cast<int>(words.size()); }
    void pack();  // fills ex/ey from words
};

/// Multi-level codebook; level l has root_size * branching^(l-1) codewords
/// and each subarea splits into branching children. The last level is the
/// single codebook shared by the single-level strategies.
struct HierarchicalCodebook {
    int root_size = 8;
    int branching = 4;
    std::vector<LevelCodebook> levels;

    const LevelCodebook& top() const { return levels.back(); }
    int num_levels() const { return static_cast<int>(levels.size()); }
    /// Indices (into level l+1) of the children of codeword `flat` at level l.
    std::vector<int> children(int level, int flat) const;
};

/// Steering profile that cancels the arrival-plus-departure LoS phase at
/// every unit cell, adding coherently toward `steer`.
Codeword narrow_beam_codeword(const SystemConfig& cfg, const Aod& steer, const Aod& incident);

/// Quadratic phase profile spreading the beam over the (ix, iy) subarea of
/// `grid`. The curvature is set from the subarea's angular extent and backed
/// off until at least half of the reflected power lands inside the target;
/// degenerate subareas fall back to the narrow design. `curvature_scale`
/// overrides the calibration when given (0 reproduces the narrow profile).
Codeword wide_beam_codeword(const SystemConfig& cfg, const SubareaGrid& grid, int ix, int iy,
                            const Aod& incident,
                            std::optional<double> curvature_scale = std::nullopt);

HierarchicalCodebook build_hierarchy(const SystemConfig& cfg, int root_size, int branching,
                                     int num_levels, const Aod& incident,
                                     double strictness = 1.0);

/// Moore neighborhood of `flat` on the grid, clipped at the boundary; the
/// cell itself is not part of the returned scan set.
std::vector<int> ts_neighborhood(const SubareaGrid& grid, int flat);

/// |g~|^2 |AF|^2 of the codeword pattern toward `obs`, pure LoS.
double codeword_pattern_gain(const SystemConfig& cfg, const Codeword& cw, const Aod& incident,
                             const Aod& obs);

/// Fraction of the total reflected power landing inside the codeword's
/// target subarea (pure-LoS pattern integration).
double power_fraction_in_subarea(const SystemConfig& cfg, const Codeword& cw,
                                 const Aod& incident);

void write_codebook_csv(const HierarchicalCodebook& book, std::ostream& out);

}  // namespace risbt
