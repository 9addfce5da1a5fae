#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace risbt {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

/// Direction seen from the RIS: elevation measured from the broadside (+z)
/// axis, azimuth in the x-y plane of the surface.
struct Aod {
    double elevation = 0.0;
    double azimuth = 0.0;
};

/// Static scenario: geometry, RIS and BS parameters, radio constants.
/// The noise power is always derived from (noise_psd, noise_figure,
/// pilot_bandwidth); it is never stored separately.
struct SystemConfig {
    int num_unit_cells = 3600;      // Q, perfect square
    int num_bs_antennas = 16;       // N
    double unit_cell_len_x = 0.0;   // d_x [m]
    double unit_cell_len_y = 0.0;   // d_y [m]
    double bs_antenna_spacing = 0.0;  // d [m]
    double tx_power = 0.0316227766016838;  // P [W] (15 dBm)
    double tx_gain = 1.0;           // G_t, linear
    double rx_gain = 1.0;           // G_r, linear
    double wavelength = 0.0;        // lambda [m]
    double noise_psd = 3.98107170553497e-21;   // N0 [W/Hz] (-174 dBm/Hz)
    double noise_figure = 3.98107170553497;    // F, linear (6 dB)
    double pilot_bandwidth = 1.0e6; // B = 1/T_p [Hz]
    double area_factor = 1.0;       // Gamma (AoA / polarization factor)
    double unit_cell_gain = 0.0;    // |g~|
    double min_training_snr = 25.0; // gamma_min, linear
    Vec3 bs_position{0.0, 40.0, 50.0};
    Vec3 area_center{-10.0, -20.0, 100.0};
    double area_extent_y = 100.0;   // A_y [m]
    double area_extent_z = 50.0;    // A_z [m]

    double noise_power() const { return noise_psd * noise_figure * pilot_bandwidth; }
    double pilot_symbol_duration() const { return 1.0 / pilot_bandwidth; }
    int ris_side() const;
    double area() const { return area_extent_y * area_extent_z; }
    double bs_ris_distance() const { return bs_position.norm(); }

    /// Fills wavelength-dependent defaults (half-wavelength cells/spacing,
    /// aperture-limited unit-cell gain) for fields left at zero.
    void apply_wavelength_defaults();
};

/// Timing constants of the transmission protocol.
struct TimingConfig {
    double ris_response_time = 1.0e-6;            // tau [s]
    double pilot_symbol_duration = 1.0e-6;        // T_p [s]
    double feedback_delay = 1.0e-4;               // delta [s]
    double channel_estimation_overhead = 4.0e-5;  // T_e [s]
    double frame_factor = 0.15;                   // alpha > 0
    double user_velocity = 3.0 / 3.6;             // v [m/s]
};

/// Regular partition of the coverage area into count_x * count_y equal
/// rectangular subareas. count_x runs along z, count_y along y; centers are
/// stored row-major with the z index outer, matching 1-based (m_x, m_y).
struct SubareaGrid {
    int level = 1;
    int count_x = 1;                // M_lx
    int count_y = 1;                // M_ly
    std::vector<Vec3> centers;      // size count_x * count_y
    std::vector<double> distances;  // R_ml from the RIS, per center
    double subarea_diameter = 0.0;  // Delta
    Vec3 area_center;
    double extent_y = 0.0;
    double extent_z = 0.0;

    int size() const { return count_x * count_y; }
    double cell_extent_y() const { return extent_y / count_y; }
    double cell_extent_z() const { return extent_z / count_x; }
    int flat_index(int mx, int my) const { return (mx - 1) * count_y + (my - 1); }
    std::pair<int, int> grid_index(int flat) const {
        return {flat / count_y + 1, flat % count_y + 1};
    }
    Vec3 center_of(int mx, int my) const { return centers[flat_index(mx, my)]; }
    double max_distance() const;
    double min_distance() const;
};

SubareaGrid partition_grid(const SystemConfig& cfg, int count_x, int count_y);

/// Factor pair (M_lx, M_ly) of total whose subareas are closest to square;
/// ties break toward the larger M_ly.
std::pair<int, int> factorize_level(int total, double extent_y, double extent_z);

Aod aod_to_point(const Vec3& p);

}  // namespace risbt
