#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "risbt/config_io.hpp"
#include "risbt/scenario.hpp"

using namespace risbt;

namespace {

SystemConfig reference_config() { return default_scenario().system; }

}  // namespace

TEST_CASE("single-cell grid reproduces the area center") {
    const SystemConfig cfg = reference_config();
    const SubareaGrid grid = partition_grid(cfg, 1, 1);

    REQUIRE(grid.size() == 1);
    CHECK(grid.centers[0].x == doctest::Approx(-10.0));
    CHECK(grid.centers[0].y == doctest::Approx(-20.0));
    CHECK(grid.centers[0].z == doctest::Approx(100.0));
    // hand-evaluated: sqrt(100^2 + 50^2), sqrt(10^2 + 20^2 + 100^2)
    CHECK(grid.subarea_diameter == doctest::Approx(111.8033988750).epsilon(1e-9));
    CHECK(grid.distances[0] == doctest::Approx(std::sqrt(10500.0)).epsilon(1e-12));
}

TEST_CASE("2x2 grid is symmetric about the area center") {
    const SystemConfig cfg = reference_config();
    const SubareaGrid grid = partition_grid(cfg, 2, 2);
    REQUIRE(grid.size() == 4);

    Vec3 mean{0, 0, 0};
    for (const Vec3& c : grid.centers) mean = mean + c * 0.25;
    CHECK(mean.x == doctest::Approx(cfg.area_center.x));
    CHECK(mean.y == doctest::Approx(cfg.area_center.y));
    CHECK(mean.z == doctest::Approx(cfg.area_center.z));
}

TEST_CASE("grid centers match the closed-form offsets") {
    const SystemConfig cfg = reference_config();
    const SubareaGrid grid = partition_grid(cfg, 2, 4);
    // m_x = 1, m_y = 1: y = -20 + (100/8)(2-1-4), z = 100 + (50/4)(2-1-2)
    const Vec3 first = grid.center_of(1, 1);
    CHECK(first.y == doctest::Approx(-20.0 + 12.5 * -3.0));
    CHECK(first.z == doctest::Approx(100.0 + 12.5 * -1.0));
    const Vec3 last = grid.center_of(2, 4);
    CHECK(last.y == doctest::Approx(-20.0 + 12.5 * 3.0));
    CHECK(last.z == doctest::Approx(100.0 + 12.5 * 1.0));
}

TEST_CASE("partition_grid rejects zero counts") {
    const SystemConfig cfg = reference_config();
    CHECK_THROWS_AS(partition_grid(cfg, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(partition_grid(cfg, 1, 0), std::invalid_argument);
}

TEST_CASE("grid distances stay within the geometric envelope") {
    const SystemConfig cfg = reference_config();
    for (int mx : {1, 2, 8}) {
        for (int my : {1, 4, 16}) {
            const SubareaGrid grid = partition_grid(cfg, mx, my);
            const double center_r = cfg.area_center.norm();
            CHECK(grid.max_distance() <=
                  center_r + grid.subarea_diameter * grid.size());
            // nearest possible point of the area: project origin onto the plane box
            const double ny = std::clamp(0.0, cfg.area_center.y - cfg.area_extent_y / 2,
                                         cfg.area_center.y + cfg.area_extent_y / 2);
            const double nz = std::clamp(0.0, cfg.area_center.z - cfg.area_extent_z / 2,
                                         cfg.area_center.z + cfg.area_extent_z / 2);
            const double nearest = Vec3{cfg.area_center.x, ny, nz}.norm();
            CHECK(grid.min_distance() >= nearest - 1e-9);
        }
    }
}

TEST_CASE("subarea diameter strictly decreases with either count") {
    const SystemConfig cfg = reference_config();
    for (int fixed : {1, 4}) {
        double prev_x = partition_grid(cfg, 1, fixed).subarea_diameter;
        double prev_y = partition_grid(cfg, fixed, 1).subarea_diameter;
        for (int n = 2; n <= 32; n *= 2) {
            const double dx = partition_grid(cfg, n, fixed).subarea_diameter;
            const double dy = partition_grid(cfg, fixed, n).subarea_diameter;
            CHECK(dx < prev_x);
            CHECK(dy < prev_y);
            prev_x = dx;
            prev_y = dy;
        }
    }
}

TEST_CASE("factorize_level picks near-square subareas") {
    CHECK(factorize_level(1, 100.0, 50.0) == std::pair{1, 1});
    // enumerated by hand: 8 = 2 x 4 gives 25 m x 25 m cells
    CHECK(factorize_level(8, 100.0, 50.0) == std::pair{2, 4});
    CHECK(factorize_level(32, 100.0, 50.0) == std::pair{4, 8});
    CHECK(factorize_level(512, 100.0, 50.0) == std::pair{16, 32});
    // 2048 = 32 x 64 gives 1.5625 m x 1.5625 m cells
    CHECK(factorize_level(2048, 100.0, 50.0) == std::pair{32, 64});
    CHECK_THROWS_AS(factorize_level(0, 100.0, 50.0), std::invalid_argument);
}

TEST_CASE("factorize_level is deterministic and favors larger M_ly on ties") {
    // square area, M = 2: both (1,2) and (2,1) deviate equally
    const auto p = factorize_level(2, 60.0, 60.0);
    CHECK(p == factorize_level(2, 60.0, 60.0));
    CHECK(p.second >= p.first);
}

TEST_CASE("refined grid centers stay inside their parent subarea") {
    const SystemConfig cfg = reference_config();
    const SubareaGrid parent = partition_grid(cfg, 2, 4);
    const SubareaGrid child = partition_grid(cfg, 4, 8);
    for (int cx = 1; cx <= 4; ++cx) {
        for (int cy = 1; cy <= 8; ++cy) {
            const Vec3 c = child.center_of(cx, cy);
            const int px = (cx + 1) / 2;
            const int py = (cy + 1) / 2;
            const Vec3 pc = parent.center_of(px, py);
            CHECK(std::abs(c.y - pc.y) <= parent.cell_extent_y() / 2 + 1e-9);
            CHECK(std::abs(c.z - pc.z) <= parent.cell_extent_z() / 2 + 1e-9);
        }
    }
}

TEST_CASE("aod_to_point matches the direction-cosine convention") {
    const Aod broadside = aod_to_point({0.0, 0.0, 100.0});
    CHECK(broadside.elevation == doctest::Approx(0.0));
    CHECK(broadside.azimuth == doctest::Approx(0.0));

    const Aod diag = aod_to_point({1.0, 0.0, 1.0});
    CHECK(diag.elevation == doctest::Approx(M_PI / 4));
    CHECK(diag.azimuth == doctest::Approx(0.0));

    // area center: elevation = acos(100 / sqrt(10500)) = 0.2199841...
    const Aod center = aod_to_point({-10.0, -20.0, 100.0});
    CHECK(center.elevation == doctest::Approx(0.2199879774).epsilon(1e-6));

    CHECK_THROWS_AS(aod_to_point({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("noise power is derived, never stored") {
    SystemConfig cfg = reference_config();
    const double expected = cfg.noise_psd * cfg.noise_figure * cfg.pilot_bandwidth;
    CHECK(cfg.noise_power() == doctest::Approx(expected));
    cfg.pilot_bandwidth *= 2.0;
    CHECK(cfg.noise_power() == doctest::Approx(2.0 * expected));
    CHECK(cfg.pilot_symbol_duration() * cfg.pilot_bandwidth == doctest::Approx(1.0));
}

TEST_CASE("non-square cell counts are rejected") {
    SystemConfig cfg = reference_config();
    cfg.num_unit_cells = 3601;
    CHECK_THROWS_AS(cfg.ris_side(), std::invalid_argument);
}
