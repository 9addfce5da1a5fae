#include "risbt/codebook.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace risbt {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

struct DirectionCosines {
    double wx = 0.0;
    double wy = 0.0;
};

DirectionCosines cosines(const Aod& a) {
    return {std::sin(a.elevation) * std::cos(a.azimuth),
            std::sin(a.elevation) * std::sin(a.azimuth)};
}

DirectionCosines cosines(const Vec3& p) {
    const double r = p.norm();
    return {p.x / r, p.y / r};
}

// Axis phasors of the linear steering term plus an optional quadratic term
// centered on the aperture.
Eigen::VectorXcd axis_profile(int side, double spacing, double wavelength, double w_total,
                              double curvature) {
    Eigen::VectorXcd v(side);
    const double k_lin = -2.0 * M_PI / wavelength * spacing * w_total;
    const double mid = 0.5 * (side - 1);
    for (int q = 0; q < side; ++q) {
        const double pos = (q - mid) * spacing;
        const double phase = k_lin * q - M_PI / wavelength * curvature * pos * pos;
        v(q) = std::exp(kImag * phase);
    }
    return v;
}

// Aperture excitation along one axis: codeword phase with the incident
// arrival phase folded back in. The reflected pattern toward direction
// cosine w is sum_q a_q exp(j 2 pi spacing q w / lambda).
Eigen::VectorXcd excitation(const Eigen::VectorXcd& axis, int side, double spacing,
                            double wavelength, double w_incident) {
    Eigen::VectorXcd a(side);
    const double k = 2.0 * M_PI / wavelength * spacing * w_incident;
    for (int q = 0; q < side; ++q) a(q) = axis(q) * std::exp(kImag * (k * q));
    return a;
}

std::complex<double> pattern_axis(const Eigen::VectorXcd& a, double spacing, double wavelength,
                                  double w) {
    const double k = 2.0 * M_PI / wavelength * spacing * w;
    std::complex<double> sum = 0.0;
    for (Eigen::Index q = 0; q < a.size(); ++q) sum += a(q) * std::exp(kImag * (k * q));
    return sum;
}

struct SubareaRect {
    double y_lo, y_hi, z_lo, z_hi, x;
};

SubareaRect subarea_rect(const SubareaGrid& grid, int ix, int iy) {
    const double cy = grid.cell_extent_y();
    const double cz = grid.cell_extent_z();
    const Vec3 c = grid.center_of(ix, iy);
    return {c.y - cy / 2.0, c.y + cy / 2.0, c.z - cz / 2.0, c.z + cz / 2.0, c.x};
}

// Direction-cosine extent of a plane rectangle, sampled along its edges
// (the mapping is smooth, so extrema lie on the boundary).
void cosine_extent(const SubareaRect& r, double& span_x, double& span_y) {
    constexpr int kEdgeSamples = 24;
    double min_x = 1.0, max_x = -1.0, min_y = 1.0, max_y = -1.0;
    auto visit = [&](double y, double z) {
        const DirectionCosines w = cosines(Vec3{r.x, y, z});
        min_x = std::min(min_x, w.wx);
        max_x = std::max(max_x, w.wx);
        min_y = std::min(min_y, w.wy);
        max_y = std::max(max_y, w.wy);
    };
    for (int i = 0; i <= kEdgeSamples; ++i) {
        const double t = static_cast<double>(i) / kEdgeSamples;
        const double y = r.y_lo + t * (r.y_hi - r.y_lo);
        const double z = r.z_lo + t * (r.z_hi - r.z_lo);
        visit(y, r.z_lo);
        visit(y, r.z_hi);
        visit(r.y_lo, z);
        visit(r.y_hi, z);
    }
    span_x = max_x - min_x;
    span_y = max_y - min_y;
}

}  // namespace

Eigen::VectorXd Codeword::phases() const {
    const int side = static_cast<int>(axis_x.size());
    Eigen::VectorXd psi(side * side);
    for (int qy = 0; qy < side; ++qy)
        for (int qx = 0; qx < side; ++qx) {
            double p = std::arg(axis_x(qx) * axis_y(qy));
            if (p < 0.0) p += 2.0 * M_PI;
            psi(qx + side * qy) = p;
        }
    return psi;
}

RisReflection Codeword::reflection(const SystemConfig& cfg) const {
    return {phases(), unit_cell_factor(cfg)};
}

void LevelCodebook::pack() {
    const int side = static_cast<int>(words.front().axis_x.size());
    ex.resize(side, size());
    ey.resize(side, size());
    for (int m = 0; m < size(); ++m) {
        ex.col(m) = words[m].axis_x;
        ey.col(m) = words[m].axis_y;
    }
}

std::vector<int> HierarchicalCodebook::children(int level, int flat) const {
    if (level < 1 || level >= num_levels())
        throw std::out_of_range("children: level has no refinement");
    const LevelCodebook& parent = levels[level - 1];
    const LevelCodebook& child = levels[level];
    const int split = child.grid.count_x / parent.grid.count_x;
    const auto [mx, my] = parent.grid.grid_index(flat);
    std::vector<int> out;
    out.reserve(static_cast<size_t>(split) * split);
    for (int cx = split * (mx - 1) + 1; cx <= split * mx; ++cx)
        for (int cy = split * (my - 1) + 1; cy <= split * my; ++cy)
            out.push_back(child.grid.flat_index(cx, cy));
    return out;
}

Codeword narrow_beam_codeword(const SystemConfig& cfg, const Aod& steer, const Aod& incident) {
    const int side = cfg.ris_side();
    const DirectionCosines ws = cosines(steer);
    const DirectionCosines wi = cosines(incident);
    Codeword cw;
    cw.design = BeamDesign::Narrow;
    cw.axis_x = axis_profile(side, cfg.unit_cell_len_x, cfg.wavelength, ws.wx + wi.wx, 0.0);
    cw.axis_y = axis_profile(side, cfg.unit_cell_len_y, cfg.wavelength, ws.wy + wi.wy, 0.0);
    return cw;
}

Codeword wide_beam_codeword(const SystemConfig& cfg, const SubareaGrid& grid, int ix, int iy,
                            const Aod& incident, std::optional<double> curvature_scale) {
    const int side = cfg.ris_side();
    const SubareaRect rect = subarea_rect(grid, ix, iy);
    const Vec3 center = grid.center_of(ix, iy);
    const Aod steer = aod_to_point(center);

    // Spread target: the idealized wide beam deposits the collected power
    // uniformly per unit PLANE area, so the design covers the plane-area
    // equivalent solid angle (cell_y / R) x (cell_z / R) rather than the
    // perspective-collapsed extent of a grazing subarea. The z extent maps
    // radially in the direction-cosine plane, the y extent transversally.
    const double r_c = center.norm();
    const double ux = center.x / r_c;
    const double uy = center.y / r_c;
    const double ut = std::hypot(ux, uy);
    const double cy = grid.cell_extent_y();
    const double cz = grid.cell_extent_z();
    double span_x = 0.0, span_y = 0.0;
    if (ut > 1e-9) {
        span_x = std::abs(ux / ut) * cz / r_c + std::abs(ux * uy) * cy / r_c;
        span_y = (1.0 - uy * uy) * cy / r_c + std::abs(uy / ut) * cz / r_c;
    }
    // never narrower than the true perspective extent of the cell
    double true_x = 0.0, true_y = 0.0;
    cosine_extent(rect, true_x, true_y);
    span_x = std::max(span_x, true_x);
    span_y = std::max(span_y, true_y);

    const double aperture_x = side * cfg.unit_cell_len_x;
    const double aperture_y = side * cfg.unit_cell_len_y;
    const double base_x = span_x / aperture_x;
    const double base_y = span_y / aperture_y;

    // Degenerate target: nothing to spread over.
    const double natural = beam_width_approx(cfg.num_unit_cells);
    if (span_x < natural / 8.0 && span_y < natural / 8.0) {
        Codeword cw = narrow_beam_codeword(cfg, steer, incident);
        cw.level = grid.level;
        cw.index_x = ix;
        cw.index_y = iy;
        cw.target_center = center;
        cw.target_half_y = grid.cell_extent_y() / 2.0;
        cw.target_half_z = grid.cell_extent_z() / 2.0;
        return cw;
    }

    const DirectionCosines ws = cosines(steer);
    const DirectionCosines wi = cosines(incident);
    auto make = [&](double scale) {
        Codeword cw;
        cw.design = BeamDesign::Wide;
        cw.level = grid.level;
        cw.index_x = ix;
        cw.index_y = iy;
        cw.target_center = center;
        cw.target_half_y = grid.cell_extent_y() / 2.0;
        cw.target_half_z = grid.cell_extent_z() / 2.0;
        cw.curvature_x = scale * base_x;
        cw.curvature_y = scale * base_y;
        cw.axis_x = axis_profile(side, cfg.unit_cell_len_x, cfg.wavelength, ws.wx + wi.wx,
                                 cw.curvature_x);
        cw.axis_y = axis_profile(side, cfg.unit_cell_len_y, cfg.wavelength, ws.wy + wi.wy,
                                 cw.curvature_y);
        return cw;
    };

    if (curvature_scale) return make(*curvature_scale);

    // Calibration: keep at least half of the geometrically capturable power
    // inside the target. A grazing cell subtends only the fraction
    // Omega_true / Omega_eq of the designed solid angle, which bounds the
    // achievable capture; broadside cells reduce to the plain 50 % rule.
    const double target = 0.5 * std::min(1.0, subarea_solid_angle(grid, ix, iy) /
                                                  (cy * cz / (r_c * r_c)));
    double scale = 1.0;
    Codeword cw = make(scale);
    for (int step = 0;
         step < 8 && power_fraction_in_subarea(cfg, cw, incident) < target; ++step) {
        scale *= 0.75;
        cw = make(scale);
    }
    return cw;
}

HierarchicalCodebook build_hierarchy(const SystemConfig& cfg, int root_size, int branching,
                                     int num_levels, const Aod& incident, double strictness) {
    if (num_levels < 1) throw std::invalid_argument("build_hierarchy: L must be >= 1");
    if (root_size < 1) throw std::invalid_argument("build_hierarchy: M0 must be >= 1");
    int split = 0;
    if (num_levels > 1) {
        split = static_cast<int>(std::lround(std::sqrt(static_cast<double>(branching))));
        if (split < 2 || split * split != branching)
            throw std::invalid_argument(
                "build_hierarchy: branching must be a square number >= 4");
    }

    HierarchicalCodebook book;
    book.root_size = root_size;
    book.branching = branching;
    book.levels.reserve(static_cast<size_t>(num_levels));

    auto [mx, my] = factorize_level(root_size, cfg.area_extent_y, cfg.area_extent_z);
    for (int level = 1; level <= num_levels; ++level) {
        LevelCodebook lc;
        lc.grid = partition_grid(cfg, mx, my);
        lc.grid.level = level;
        lc.regime = classify_regime(cfg, lc.grid, strictness);

        lc.words.reserve(static_cast<size_t>(lc.grid.size()));
        for (int gx = 1; gx <= mx; ++gx) {
            for (int gy = 1; gy <= my; ++gy) {
                Codeword cw;
                if (lc.regime.classification == SnrRegime::NarrowBeam) {
                    cw = narrow_beam_codeword(cfg, aod_to_point(lc.grid.center_of(gx, gy)),
                                              incident);
                    cw.level = level;
                    cw.index_x = gx;
                    cw.index_y = gy;
                    cw.target_center = lc.grid.center_of(gx, gy);
                    cw.target_half_y = lc.grid.cell_extent_y() / 2.0;
                    cw.target_half_z = lc.grid.cell_extent_z() / 2.0;
                } else {
                    cw = wide_beam_codeword(cfg, lc.grid, gx, gy, incident);
                }
                lc.words.push_back(std::move(cw));
            }
        }
        lc.pack();
        book.levels.push_back(std::move(lc));
        mx *= split;
        my *= split;
    }
    return book;
}

std::vector<int> ts_neighborhood(const SubareaGrid& grid, int flat) {
    if (flat < 0 || flat >= grid.size())
        throw std::out_of_range("ts_neighborhood: index out of range");
    const auto [mx, my] = grid.grid_index(flat);
    std::vector<int> out;
    out.reserve(8);
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
            if (dx == 0 && dy == 0) continue;
            const int nx = mx + dx;
            const int ny = my + dy;
            if (nx < 1 || nx > grid.count_x || ny < 1 || ny > grid.count_y) continue;
            out.push_back(grid.flat_index(nx, ny));
        }
    return out;
}

double codeword_pattern_gain(const SystemConfig& cfg, const Codeword& cw, const Aod& incident,
                             const Aod& obs) {
    const int side = static_cast<int>(cw.axis_x.size());
    const DirectionCosines wi = cosines(incident);
    const DirectionCosines wo = cosines(obs);
    const Eigen::VectorXcd ax =
        excitation(cw.axis_x, side, cfg.unit_cell_len_x, cfg.wavelength, wi.wx);
    const Eigen::VectorXcd ay =
        excitation(cw.axis_y, side, cfg.unit_cell_len_y, cfg.wavelength, wi.wy);
    const std::complex<double> fx = pattern_axis(ax, cfg.unit_cell_len_x, cfg.wavelength, wo.wx);
    const std::complex<double> fy = pattern_axis(ay, cfg.unit_cell_len_y, cfg.wavelength, wo.wy);
    return cfg.unit_cell_gain * cfg.unit_cell_gain * std::norm(fx) * std::norm(fy);
}

double power_fraction_in_subarea(const SystemConfig& cfg, const Codeword& cw,
                                 const Aod& incident) {
    constexpr int kSamples = 40;
    const int side = static_cast<int>(cw.axis_x.size());
    const DirectionCosines wi = cosines(incident);
    const Eigen::VectorXcd ax =
        excitation(cw.axis_x, side, cfg.unit_cell_len_x, cfg.wavelength, wi.wx);
    const Eigen::VectorXcd ay =
        excitation(cw.axis_y, side, cfg.unit_cell_len_y, cfg.wavelength, wi.wy);

    const double y0 = cw.target_center.y - cw.target_half_y;
    const double z0 = cw.target_center.z - cw.target_half_z;
    const double dy = 2.0 * cw.target_half_y / kSamples;
    const double dz = 2.0 * cw.target_half_z / kSamples;
    const double x = cw.target_center.x;

    // Solid-angle integral over the target mapped to direction-cosine
    // measure; the total radiated power over one period is (lambda/d_x)
    // (lambda/d_y) Q by Parseval, independent of the phase profile.
    double collected = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double y = y0 + (i + 0.5) * dy;
        for (int j = 0; j < kSamples; ++j) {
            const double z = z0 + (j + 0.5) * dz;
            const Vec3 p{x, y, z};
            const double r = p.norm();
            const DirectionCosines w = cosines(p);
            const double weight = p.z * std::abs(x) / (r * r * r * r);
            const std::complex<double> fx =
                pattern_axis(ax, cfg.unit_cell_len_x, cfg.wavelength, w.wx);
            const std::complex<double> fy =
                pattern_axis(ay, cfg.unit_cell_len_y, cfg.wavelength, w.wy);
            collected += std::norm(fx) * std::norm(fy) * weight * dy * dz;
        }
    }
    const double total = (cfg.wavelength / cfg.unit_cell_len_x) *
                         (cfg.wavelength / cfg.unit_cell_len_y) * cfg.num_unit_cells;
    return collected / total;
}

void write_codebook_csv(const HierarchicalCodebook& book, std::ostream& out) {
    out << "level,m_x,m_y,q,psi\n";
    char buf[96];
    for (const LevelCodebook& lc : book.levels) {
        for (const Codeword& cw : lc.words) {
            const Eigen::VectorXd psi = cw.phases();
            for (Eigen::Index q = 0; q < psi.size(); ++q) {
                std::snprintf(buf, sizeof buf, "%d,%d,%d,%ld,%.12g\n", cw.level, cw.index_x,
                              cw.index_y, static_cast<long>(q), psi(q));
                out << buf;
            }
        }
    }
}

}  // namespace risbt
