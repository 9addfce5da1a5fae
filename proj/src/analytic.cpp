#include "risbt/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace risbt {

const char* to_string(SnrRegime r) {
    switch (r) {
        case SnrRegime::WideBeam: return "WBR";
        case SnrRegime::Transition: return "Transition";
        case SnrRegime::NarrowBeam: return "NBR";
    }
    return "?";
}

SnrConstants SnrConstants::from_config(const SystemConfig& cfg, double ris_user_distance) {
    SnrConstants c;
    c.bs_ris_distance = cfg.bs_ris_distance();
    c.ris_user_distance =
        ris_user_distance > 0.0 ? ris_user_distance : cfg.area_center.norm();
    c.area_factor = cfg.area_factor;
    c.unit_cell_gain = cfg.unit_cell_gain;
    c.area = cfg.area();

    const double lambda2 = cfg.wavelength * cfg.wavelength;
    const double link_budget =
        cfg.tx_power * cfg.tx_gain * cfg.num_bs_antennas * cfg.rx_gain / cfg.noise_power();
    const double four_pi_ri = 4.0 * M_PI * c.bs_ris_distance;
    const double four_pi_rr = 4.0 * M_PI * c.ris_user_distance;

    c.wide_beam = link_budget * lambda2 * cfg.unit_cell_len_x * cfg.unit_cell_len_y *
                  cfg.area_factor / (four_pi_ri * four_pi_ri * c.area);
    c.narrow_beam = link_budget * lambda2 * lambda2 * c.unit_cell_gain * c.unit_cell_gain /
                    (four_pi_ri * four_pi_ri * four_pi_rr * four_pi_rr);
    return c;
}

double beam_width_exact(int num_unit_cells) {
    if (num_unit_cells <= 13)
        throw std::invalid_argument("beam_width: valid for Q > 13 only");
    const double x = kHalfPowerConstant / (M_PI * std::sqrt(static_cast<double>(num_unit_cells)));
    return std::abs(M_PI / 2.0 - std::acos(x)) + std::abs(M_PI / 2.0 - std::acos(-x));
}

double beam_width_approx(int num_unit_cells) {
    if (num_unit_cells <= 13)
        throw std::invalid_argument("beam_width: valid for Q > 13 only");
    return 2.0 * kHalfPowerConstant /
           (M_PI * std::sqrt(static_cast<double>(num_unit_cells)));
}

FootprintDiameter footprint_diameter(double distance, int num_unit_cells) {
    if (distance <= 0.0) throw std::invalid_argument("footprint_diameter: distance must be > 0");
    FootprintDiameter f;
    f.exact = 2.0 * distance * std::tan(beam_width_exact(num_unit_cells) / 2.0);
    f.approx = kFootprintConstant * distance / std::sqrt(static_cast<double>(num_unit_cells));
    return f;
}

RegimeReport classify_regime(const SystemConfig& cfg, const SubareaGrid& grid,
                             double strictness) {
    if (strictness < 1.0)
        throw std::invalid_argument("classify_regime: strictness must be >= 1");

    const double cy = grid.cell_extent_y();
    const double cz = grid.cell_extent_z();
    const double diag2 = cy * cy + cz * cz;

    RegimeReport r;
    r.level = grid.level;
    const double wmax = kFootprintConstant * grid.max_distance();
    const double wmin = kFootprintConstant * grid.min_distance();
    r.rhs_wbr = wmax * wmax / diag2;
    r.rhs_nbr = wmin * wmin / diag2;

    const double q = static_cast<double>(cfg.num_unit_cells);
    if (q >= strictness * r.rhs_wbr) {
        r.classification = SnrRegime::WideBeam;
        r.margin_factor = q / r.rhs_wbr;
    } else if (q <= r.rhs_nbr / strictness) {
        r.classification = SnrRegime::NarrowBeam;
        r.margin_factor = r.rhs_nbr / q;
    } else {
        r.classification = SnrRegime::Transition;
        r.margin_factor = std::min(r.rhs_wbr / q, q / r.rhs_nbr);
    }
    return r;
}

double ScalingLaw::point_value() const {
    switch (regime) {
        case SnrRegime::WideBeam: return wide_beam_value;
        case SnrRegime::NarrowBeam: return narrow_beam_value;
        case SnrRegime::Transition: return conservative_value();
    }
    return conservative_value();
}

double ScalingLaw::conservative_value() const {
    return std::min(wide_beam_value, narrow_beam_value);
}

ScalingLaw snr_scaling(const SystemConfig& cfg, const SubareaGrid& grid,
                       const SnrConstants& constants, SnrRegime regime) {
    ScalingLaw law;
    law.regime = regime;
    const double q = static_cast<double>(cfg.num_unit_cells);
    law.wide_beam_value = constants.wide_beam * q * grid.size();
    law.narrow_beam_value = constants.narrow_beam * q * q;
    return law;
}

namespace {

// sin(sqrt(Q) w) / sin(w) with the w -> n*pi limit sqrt(Q) * (-1)^...
// handled; only the magnitude is used by callers.
double periodic_sinc_ratio(double w, double side) {
    const double s = std::sin(w);
    if (std::abs(s) < 1e-12) return side * std::cos(side * w) / std::cos(w);
    return std::sin(side * w) / s;
}

}  // namespace

double ris_gain_pattern(int num_unit_cells, const Aod& steer, const Aod& obs,
                        double spacing_x, double spacing_y, double wavelength,
                        double unit_cell_gain) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_unit_cells))));
    if (side * side != num_unit_cells)
        throw std::invalid_argument("ris_gain_pattern: Q must be a perfect square");

    const double wx_obs = std::sin(obs.elevation) * std::cos(obs.azimuth);
    const double wy_obs = std::sin(obs.elevation) * std::sin(obs.azimuth);
    const double wx_st = std::sin(steer.elevation) * std::cos(steer.azimuth);
    const double wy_st = std::sin(steer.elevation) * std::sin(steer.azimuth);

    const double wx = M_PI * spacing_x / wavelength * (wx_obs - wx_st);
    const double wy = M_PI * spacing_y / wavelength * (wy_obs - wy_st);

    const double fx = periodic_sinc_ratio(wx, side);
    const double fy = periodic_sinc_ratio(wy, side);
    return unit_cell_gain * unit_cell_gain * fx * fx * fy * fy;
}

PilotRequirement min_pilots(double min_snr, double achievable_snr) {
    if (min_snr <= 0.0 || achievable_snr <= 0.0)
        throw std::invalid_argument("min_pilots: SNRs must be > 0");
    const double ratio = min_snr / achievable_snr;
    if (ratio < 1.0) return {1, false};
    return {static_cast<int>(std::ceil(ratio)), true};
}

}  // namespace risbt
