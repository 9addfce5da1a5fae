#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "risbt/analytic.hpp"
#include "risbt/config_io.hpp"

using namespace risbt;

namespace {

const Scenario& scenario() {
    static const Scenario sc = default_scenario();
    return sc;
}

SubareaGrid level_grid(int level) {
    // 8, 32, 128, 512, 2048 with the near-square split
    int m = 8;
    for (int l = 1; l < level; ++l) m *= 4;
    const auto [mx, my] =
        factorize_level(m, scenario().system.area_extent_y, scenario().system.area_extent_z);
    SubareaGrid grid = partition_grid(scenario().system, mx, my);
    grid.level = level;
    return grid;
}

}  // namespace

TEST_CASE("beam width matches the hand-evaluated approximation") {
    // 2 * 2.782 / (pi * 60) = 0.029518...
    CHECK(beam_width_approx(3600) == doctest::Approx(0.0295181).epsilon(1e-5));
    CHECK(std::abs(beam_width_exact(3600) - beam_width_approx(3600)) /
              beam_width_exact(3600) <
          1e-3);
    CHECK_THROWS_AS(beam_width_exact(13), std::invalid_argument);
    CHECK_THROWS_AS(beam_width_approx(9), std::invalid_argument);
}

TEST_CASE("exact and approximate beam widths converge for large surfaces") {
    double prev = std::abs(beam_width_exact(100) / beam_width_approx(100) - 1.0);
    for (int q : {400, 1600, 6400, 25600}) {
        const double err = std::abs(beam_width_exact(q) / beam_width_approx(q) - 1.0);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("footprint diameter at the area center") {
    const double r = std::sqrt(10500.0);  // 102.47 m
    const FootprintDiameter f = footprint_diameter(r, 3600);
    // 1.77 * 102.47 / 60
    CHECK(f.approx == doctest::Approx(3.02285).epsilon(1e-4));
    CHECK(f.exact == doctest::Approx(f.approx).epsilon(2e-3));
    CHECK_THROWS_AS(footprint_diameter(0.0, 3600), std::invalid_argument);
}

TEST_CASE("footprint scalings: linear in R, inverse square root in Q") {
    const FootprintDiameter base = footprint_diameter(100.0, 400);
    CHECK(footprint_diameter(200.0, 400).approx == doctest::Approx(2 * base.approx));
    CHECK(footprint_diameter(100.0, 1600).approx == doctest::Approx(base.approx / 2));
}

TEST_CASE("regime classification across the hierarchy") {
    const SystemConfig& cfg = scenario().system;
    for (int level = 1; level <= 3; ++level) {
        const RegimeReport rep = classify_regime(cfg, level_grid(level));
        CHECK(rep.classification == SnrRegime::WideBeam);
    }
    // level 5 is narrow-beam; level 4 sits at the wide-beam boundary
    CHECK(classify_regime(cfg, level_grid(5)).classification == SnrRegime::NarrowBeam);
    CHECK(classify_regime(cfg, level_grid(4)).classification != SnrRegime::NarrowBeam);
}

TEST_CASE("whole-area codebook of one is wide-beam") {
    const SystemConfig& cfg = scenario().system;
    const SubareaGrid grid = partition_grid(cfg, 1, 1);
    const RegimeReport rep = classify_regime(cfg, grid);
    CHECK(rep.classification == SnrRegime::WideBeam);
    CHECK(rep.rhs_wbr < 100.0);  // far below Q = 3600
}

TEST_CASE("classification is monotone in Q") {
    SystemConfig cfg = scenario().system;
    const SubareaGrid grid = level_grid(4);
    int last = 0;  // 0 = NBR, 1 = transition, 2 = WBR
    for (int side = 10; side <= 120; side += 10) {
        cfg.num_unit_cells = side * side;
        const SnrRegime r = classify_regime(cfg, grid).classification;
        const int rank = r == SnrRegime::NarrowBeam ? 0 : r == SnrRegime::Transition ? 1 : 2;
        CHECK(rank >= last);
        last = rank;
    }
}

TEST_CASE("strictness widens the transition band") {
    const SystemConfig& cfg = scenario().system;
    const SubareaGrid grid = level_grid(4);
    CHECK(classify_regime(cfg, grid, 1.0).classification == SnrRegime::WideBeam);
    CHECK(classify_regime(cfg, grid, 1.5).classification == SnrRegime::Transition);
    CHECK_THROWS_AS(classify_regime(cfg, grid, 0.5), std::invalid_argument);
}

TEST_CASE("scaling-law constants against a direct evaluation") {
    const SystemConfig& cfg = scenario().system;
    const SnrConstants c = SnrConstants::from_config(cfg);

    const double sigma2 = cfg.noise_power();
    const double lb = cfg.tx_power * cfg.tx_gain * cfg.num_bs_antennas * cfg.rx_gain / sigma2;
    const double ri = cfg.bs_ris_distance();
    const double rr = cfg.area_center.norm();
    const double l2 = cfg.wavelength * cfg.wavelength;
    const double wide = lb * l2 * cfg.unit_cell_len_x * cfg.unit_cell_len_y /
                        (std::pow(4 * M_PI * ri, 2) * 5000.0);
    const double narrow = lb * l2 * l2 * cfg.unit_cell_gain * cfg.unit_cell_gain /
                          (std::pow(4 * M_PI * ri, 2) * std::pow(4 * M_PI * rr, 2));
    CHECK(c.wide_beam == doctest::Approx(wide).epsilon(1e-12));
    CHECK(c.narrow_beam == doctest::Approx(narrow).epsilon(1e-12));
    CHECK(c.wide_beam > 0.0);
    CHECK(c.narrow_beam > 0.0);
}

TEST_CASE("scaling laws: linear growth then plateau") {
    const SystemConfig& cfg = scenario().system;
    const SnrConstants c = SnrConstants::from_config(cfg);

    const ScalingLaw l1 = snr_scaling(cfg, level_grid(1), c, SnrRegime::WideBeam);
    const ScalingLaw l2 = snr_scaling(cfg, level_grid(2), c, SnrRegime::WideBeam);
    CHECK(l2.point_value() == doctest::Approx(4.0 * l1.point_value()));

    // narrow-beam value is independent of the level size and scales Q^2
    const ScalingLaw n5 = snr_scaling(cfg, level_grid(5), c, SnrRegime::NarrowBeam);
    const ScalingLaw n4 = snr_scaling(cfg, level_grid(4), c, SnrRegime::NarrowBeam);
    CHECK(n5.point_value() == doctest::Approx(n4.point_value()));

    SystemConfig big = cfg;
    big.num_unit_cells *= 4;
    const SnrConstants cb = SnrConstants::from_config(big);
    const ScalingLaw n_big = snr_scaling(big, level_grid(5), cb, SnrRegime::NarrowBeam);
    CHECK(n_big.point_value() == doctest::Approx(16.0 * n5.point_value()));

    // transition reports both laws as an interval; they cross near M ~ 430
    const double m_cross = c.narrow_beam * cfg.num_unit_cells / c.wide_beam;
    CHECK(m_cross > 128.0);
    CHECK(m_cross < 512.0);
    const ScalingLaw t4 = snr_scaling(cfg, level_grid(4), c, SnrRegime::Transition);
    CHECK(t4.conservative_value() == doctest::Approx(t4.narrow_beam_value));
}

TEST_CASE("idealized wide-beam law conserves the collected power") {
    const SystemConfig& cfg = scenario().system;
    const SnrConstants c = SnrConstants::from_config(cfg);
    for (int m : {8, 128, 2048}) {
        // gamma* integrated over one subarea times sigma^2 / A_rx equals the
        // power collected by the surface
        const double gamma = c.wide_beam * cfg.num_unit_cells * m;
        const double a_rx = cfg.wavelength * cfg.wavelength * cfg.rx_gain / (4.0 * M_PI);
        const double lhs = gamma * (cfg.area() / m) * cfg.noise_power() / a_rx;
        const double density = cfg.tx_power * cfg.tx_gain * cfg.num_bs_antennas /
                               (4.0 * M_PI * std::pow(cfg.bs_ris_distance(), 2));
        const double rhs = density * cfg.unit_cell_len_x * cfg.unit_cell_len_y *
                           cfg.num_unit_cells * cfg.area_factor;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("gain pattern peak, null, and symmetry") {
    const SystemConfig& cfg = scenario().system;
    const double q = cfg.num_unit_cells;
    const double g2 = cfg.unit_cell_gain * cfg.unit_cell_gain;

    const Aod steer{0.3, 1.1};
    CHECK(ris_gain_pattern(cfg.num_unit_cells, steer, steer, cfg.unit_cell_len_x,
                           cfg.unit_cell_len_y, cfg.wavelength, cfg.unit_cell_gain) ==
          doctest::Approx(g2 * q * q).epsilon(1e-9));

    // first null: W_x = pi / sqrt(Q) away in the x direction cosine
    const double dw = cfg.wavelength / (cfg.unit_cell_len_x * std::sqrt(q));
    const Aod null_obs{std::asin(dw), 0.0};
    const Aod broadside{0.0, 0.0};
    CHECK(ris_gain_pattern(cfg.num_unit_cells, broadside, null_obs, cfg.unit_cell_len_x,
                           cfg.unit_cell_len_y, cfg.wavelength, cfg.unit_cell_gain) ==
          doctest::Approx(0.0).epsilon(1e-6));

    const Aod a{0.4, 0.7}, b{0.6, 2.0};
    const double ab = ris_gain_pattern(cfg.num_unit_cells, a, b, cfg.unit_cell_len_x,
                                       cfg.unit_cell_len_y, cfg.wavelength, cfg.unit_cell_gain);
    const double ba = ris_gain_pattern(cfg.num_unit_cells, b, a, cfg.unit_cell_len_x,
                                       cfg.unit_cell_len_y, cfg.wavelength, cfg.unit_cell_gain);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
}

TEST_CASE("gain pattern never exceeds the coherent peak") {
    const SystemConfig& cfg = scenario().system;
    const double peak = cfg.unit_cell_gain * cfg.unit_cell_gain *
                        static_cast<double>(cfg.num_unit_cells) * cfg.num_unit_cells;
    const Aod steer{0.22, -2.03};
    for (double el = 0.0; el <= 1.55; el += 0.155) {
        for (double az = 0.0; az < 2 * M_PI; az += 0.3) {
            const double g =
                ris_gain_pattern(cfg.num_unit_cells, steer, {el, az}, cfg.unit_cell_len_x,
                                 cfg.unit_cell_len_y, cfg.wavelength, cfg.unit_cell_gain);
            CHECK(g <= peak * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("minimum pilot counts and regimes") {
    // ratio < 1: one pilot, SNR-independent
    CHECK(min_pilots(3.0, 10.0).count == 1);
    CHECK_FALSE(min_pilots(3.0, 10.0).snr_dependent);
    // ratio 5.2: six pilots, SNR-dependent
    const PilotRequirement p = min_pilots(5.2, 1.0);
    CHECK(p.count == 6);
    CHECK(p.snr_dependent);
    CHECK_THROWS_AS(min_pilots(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("reference scenario pilot regimes per level") {
    const SystemConfig& cfg = scenario().system;
    const SnrConstants c = SnrConstants::from_config(cfg);
    // M = 512 reaches the one-pilot regime, M <= 128 does not
    const ScalingLaw top = snr_scaling(cfg, level_grid(4), c,
                                       classify_regime(cfg, level_grid(4)).classification);
    CHECK_FALSE(min_pilots(cfg.min_training_snr, top.conservative_value()).snr_dependent);
    for (int level = 1; level <= 3; ++level) {
        const ScalingLaw law = snr_scaling(cfg, level_grid(level), c, SnrRegime::WideBeam);
        CHECK(min_pilots(cfg.min_training_snr, law.point_value()).snr_dependent);
    }
}

TEST_CASE("shorter pilots are compensated by larger pilot counts") {
    SystemConfig cfg = scenario().system;
    const SubareaGrid grid = level_grid(2);
    // SNR-dependent regime: N * T_p invariant up to ceiling granularity
    auto pilot_time = [&](double bandwidth_scale) {
        SystemConfig c2 = cfg;
        c2.pilot_bandwidth = cfg.pilot_bandwidth * bandwidth_scale;
        const SnrConstants c = SnrConstants::from_config(c2);
        const ScalingLaw law = snr_scaling(c2, grid, c, SnrRegime::WideBeam);
        const int n = min_pilots(c2.min_training_snr, law.point_value()).count;
        return std::pair{n, n * c2.pilot_symbol_duration()};
    };
    const auto [n1, t1] = pilot_time(1.0);
    CHECK(n1 > 1);
    for (double scale : {2.0, 4.0, 8.0}) {
        const auto [ns, ts] = pilot_time(scale);
        // one extra symbol of slack from the two ceilings
        CHECK(std::abs(ts - t1) <= 1.0 / cfg.pilot_bandwidth + 1e-12);
    }
}
