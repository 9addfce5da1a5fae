#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>

#include "risbt/rng.hpp"
#include "risbt/scenario.hpp"

namespace risbt {

/// Geometric Rician model parameters for one BS-RIS-user constellation.
/// NLoS azimuths are uniform on [0, 2pi), elevations uniform on [0, pi/2].
struct RicianParams {
    double k_incident = 4.0;
    double k_reflected = 4.0;
    int paths_incident = 6;
    int paths_reflected = 6;
    Aod incident;        // (theta_i, phi_i), BS LoS arrival at the RIS
    Aod reflected;       // (theta_r, phi_r), RIS LoS departure to the user
    double bs_departure = 0.0;  // omega, LoS AoD at the BS array
    double bs_ris_distance = 0.0;
    double ris_user_distance = 0.0;

    static RicianParams for_user(const SystemConfig& cfg, const Vec3& user_position);
};

enum class ArrayKind { RisArrival, RisDeparture, BsDeparture };

/// Steering vector with the element phases of the respective array. RIS
/// vectors are laid out with q = qx + side * qy.
Eigen::VectorXcd array_response(const SystemConfig& cfg, ArrayKind kind, const Aod& angles);
Eigen::VectorXcd array_response_bs(const SystemConfig& cfg, double departure);

struct ChannelRealization {
    Eigen::MatrixXcd incident;   // H_i, Q x N, includes sqrt(pathloss)
    Eigen::VectorXcd reflected;  // h_r, Q, includes sqrt(pathloss)
    double pathloss_incident = 0.0;   // eta_i
    double pathloss_reflected = 0.0;  // eta_r
    uint64_t seed = 0;
};

/// One draw of (H_i, h_r); deterministic under a fixed seed.
ChannelRealization generate_channels(const SystemConfig& cfg, const RicianParams& rp,
                                     uint64_t seed);

/// LoS / NLoS split of the same draw, for normalization checks.
struct ChannelParts {
    Eigen::MatrixXcd incident_los, incident_nlos;
    Eigen::VectorXcd reflected_los, reflected_nlos;
};

ChannelParts generate_channel_parts(const SystemConfig& cfg, const RicianParams& rp,
                                    uint64_t seed);

/// Phase-only RIS configuration. All reflection-matrix entries share the
/// magnitude |unit_cell_factor|.
struct RisReflection {
    Eigen::VectorXd phases;  // psi_q, length Q
    std::complex<double> unit_cell_factor;  // g = j 4 pi d_x d_y / lambda^2
};

std::complex<double> unit_cell_factor(const SystemConfig& cfg);

/// Precoder steered at the BS LoS departure angle, unit norm.
Eigen::VectorXcd los_precoder(const SystemConfig& cfg, const RicianParams& rp);

/// h_m^H f = h_r^H G_m H_i f for one codeword.
std::complex<double> end_to_end_gain(const ChannelRealization& ch, const RisReflection& refl,
                                     const Eigen::VectorXcd& precoder);

/// Per-symbol SNR gamma for a given end-to-end gain.
double snr_from_gain(const SystemConfig& cfg, std::complex<double> gain);

double free_space_pathloss(double wavelength, double distance);

/// Flattened (re, im) CSV dump of one realization, for cross-checks.
void write_channel_dump(const ChannelRealization& ch, std::ostream& out);

}  // namespace risbt
