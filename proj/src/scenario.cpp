#include "risbt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace risbt {

int SystemConfig::ris_side() const {
    int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_unit_cells))));
    if (side * side != num_unit_cells)
        throw std::invalid_argument("num_unit_cells must be a perfect square");
    return side;
}

void SystemConfig::apply_wavelength_defaults() {
    if (wavelength <= 0.0)
        throw std::invalid_argument("wavelength must be set before applying defaults");
    if (unit_cell_len_x <= 0.0) unit_cell_len_x = wavelength / 2.0;
    if (unit_cell_len_y <= 0.0) unit_cell_len_y = wavelength / 2.0;
    if (bs_antenna_spacing <= 0.0) bs_antenna_spacing = wavelength / 2.0;
    if (unit_cell_gain <= 0.0)
        unit_cell_gain = 4.0 * M_PI * unit_cell_len_x * unit_cell_len_y / (wavelength * wavelength);
}

double SubareaGrid::max_distance() const {
    return *std::max_element(distances.begin(), distances.end());
}

double SubareaGrid::min_distance() const {
    return *std::min_element(distances.begin(), distances.end());
}

SubareaGrid partition_grid(const SystemConfig& cfg, int count_x, int count_y) {
    if (count_x < 1 || count_y < 1)
        throw std::invalid_argument("partition_grid: subarea counts must be >= 1");

    SubareaGrid grid;
    grid.count_x = count_x;
    grid.count_y = count_y;
    grid.area_center = cfg.area_center;
    grid.extent_y = cfg.area_extent_y;
    grid.extent_z = cfg.area_extent_z;

    const double cy = cfg.area_extent_y / count_y;
    const double cz = cfg.area_extent_z / count_x;
    grid.subarea_diameter = std::sqrt(cy * cy + cz * cz);

    grid.centers.reserve(static_cast<size_t>(count_x) * count_y);
    grid.distances.reserve(grid.centers.capacity());
    for (int mx = 1; mx <= count_x; ++mx) {
        for (int my = 1; my <= count_y; ++my) {
            Vec3 c;
            c.x = cfg.area_center.x;
            c.y = cfg.area_center.y + 0.5 * cy * (2 * my - 1 - count_y);
            c.z = cfg.area_center.z + 0.5 * cz * (2 * mx - 1 - count_x);
            grid.centers.push_back(c);
            grid.distances.push_back(c.norm());
        }
    }
    return grid;
}

std::pair<int, int> factorize_level(int total, double extent_y, double extent_z) {
    if (total < 1) throw std::invalid_argument("factorize_level: total must be >= 1");

    std::pair<int, int> best{1, total};
    double best_dev = std::numeric_limits<double>::infinity();
    for (int mx = 1; mx <= total; ++mx) {
        if (total % mx != 0) continue;
        const int my = total / mx;
        const double aspect = (extent_y / my) / (extent_z / mx);
        const double dev = std::abs(aspect - 1.0);
        // strict '<' keeps the first (largest-M_ly) candidate on ties
        if (dev < best_dev) {
            best_dev = dev;
            best = {mx, my};
        }
    }
    return best;
}

Aod aod_to_point(const Vec3& p) {
    const double r = p.norm();
    if (r == 0.0) throw std::invalid_argument("aod_to_point: point at the RIS origin");
    Aod a;
    a.elevation = std::acos(std::clamp(p.z / r, -1.0, 1.0));
    a.azimuth = (p.x == 0.0 && p.y == 0.0) ? 0.0 : std::atan2(p.y, p.x);
    return a;
}

}  // namespace risbt
