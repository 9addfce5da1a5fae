#include "risbt/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace risbt {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

Eigen::VectorXcd ris_steering(const SystemConfig& cfg, const Aod& a, double sign) {
    const int side = cfg.ris_side();
    const double wx = std::sin(a.elevation) * std::cos(a.azimuth);
    const double wy = std::sin(a.elevation) * std::sin(a.azimuth);
    const double kx = sign * 2.0 * M_PI / cfg.wavelength * cfg.unit_cell_len_x * wx;
    const double ky = sign * 2.0 * M_PI / cfg.wavelength * cfg.unit_cell_len_y * wy;

    Eigen::VectorXcd v(cfg.num_unit_cells);
    for (int qy = 0; qy < side; ++qy)
        for (int qx = 0; qx < side; ++qx)
            v(qx + side * qy) = std::exp(kImag * (kx * qx + ky * qy));
    return v;
}

}  // namespace

RicianParams RicianParams::for_user(const SystemConfig& cfg, const Vec3& user_position) {
    RicianParams rp;
    rp.incident = aod_to_point(cfg.bs_position);
    rp.reflected = aod_to_point(user_position);
    rp.bs_departure = 0.0;  // ULA broadside toward the RIS by convention
    rp.bs_ris_distance = cfg.bs_ris_distance();
    rp.ris_user_distance = user_position.norm();
    return rp;
}

Eigen::VectorXcd array_response(const SystemConfig& cfg, ArrayKind kind, const Aod& angles) {
    switch (kind) {
        case ArrayKind::RisArrival: return ris_steering(cfg, angles, +1.0);
        case ArrayKind::RisDeparture: return ris_steering(cfg, angles, -1.0);
        case ArrayKind::BsDeparture: return array_response_bs(cfg, angles.elevation);
    }
    throw std::invalid_argument("array_response: unknown kind");
}

Eigen::VectorXcd array_response_bs(const SystemConfig& cfg, double departure) {
    Eigen::VectorXcd v(cfg.num_bs_antennas);
    const double k = -2.0 * M_PI / cfg.wavelength * cfg.bs_antenna_spacing * std::sin(departure);
    for (int n = 0; n < cfg.num_bs_antennas; ++n) v(n) = std::exp(kImag * (k * n));
    return v;
}

double free_space_pathloss(double wavelength, double distance) {
    const double r = wavelength / (4.0 * M_PI * distance);
    return r * r;
}

ChannelParts generate_channel_parts(const SystemConfig& cfg, const RicianParams& rp,
                                    uint64_t seed) {
    Rng rng(seed);
    ChannelParts parts;

    const double psi_i = rng.uniform(0.0, 2.0 * M_PI);
    const double psi_r = rng.uniform(0.0, 2.0 * M_PI);

    const Eigen::VectorXcd a_i = array_response(cfg, ArrayKind::RisArrival, rp.incident);
    const Eigen::VectorXcd b_los = array_response_bs(cfg, rp.bs_departure);
    const double ki = rp.k_incident;
    parts.incident_los = std::sqrt(ki / (ki + 1.0)) * std::exp(kImag * psi_i) * a_i *
                         b_los.adjoint();

    parts.incident_nlos = Eigen::MatrixXcd::Zero(cfg.num_unit_cells, cfg.num_bs_antennas);
    if (rp.paths_incident > 0) {
        const double scale = std::sqrt(1.0 / ((ki + 1.0) * rp.paths_incident));
        for (int c = 0; c < rp.paths_incident; ++c) {
            Aod a{rng.uniform(0.0, M_PI / 2.0), rng.uniform(0.0, 2.0 * M_PI)};
            const double omega = rng.uniform(0.0, 2.0 * M_PI);
            const std::complex<double> coeff = rng.complex_gaussian();
            parts.incident_nlos += scale * coeff *
                                   array_response(cfg, ArrayKind::RisArrival, a) *
                                   array_response_bs(cfg, omega).adjoint();
        }
    }

    const double kr = rp.k_reflected;
    parts.reflected_los = std::sqrt(kr / (kr + 1.0)) * std::exp(-kImag * psi_r) *
                          array_response(cfg, ArrayKind::RisDeparture, rp.reflected);

    parts.reflected_nlos = Eigen::VectorXcd::Zero(cfg.num_unit_cells);
    if (rp.paths_reflected > 0) {
        const double scale = std::sqrt(1.0 / ((kr + 1.0) * rp.paths_reflected));
        for (int c = 0; c < rp.paths_reflected; ++c) {
            Aod a{rng.uniform(0.0, M_PI / 2.0), rng.uniform(0.0, 2.0 * M_PI)};
            const std::complex<double> coeff = rng.complex_gaussian();
            parts.reflected_nlos +=
                scale * coeff * array_response(cfg, ArrayKind::RisDeparture, a);
        }
    }
    return parts;
}

ChannelRealization generate_channels(const SystemConfig& cfg, const RicianParams& rp,
                                     uint64_t seed) {
    if (rp.bs_ris_distance <= 0.0 || rp.ris_user_distance <= 0.0)
        throw std::invalid_argument("generate_channels: distances must be > 0");

    const ChannelParts parts = generate_channel_parts(cfg, rp, seed);
    ChannelRealization ch;
    ch.seed = seed;
    ch.pathloss_incident = free_space_pathloss(cfg.wavelength, rp.bs_ris_distance);
    ch.pathloss_reflected = free_space_pathloss(cfg.wavelength, rp.ris_user_distance);
    ch.incident = std::sqrt(ch.pathloss_incident) * (parts.incident_los + parts.incident_nlos);
    ch.reflected =
        std::sqrt(ch.pathloss_reflected) * (parts.reflected_los + parts.reflected_nlos);
    return ch;
}

std::complex<double> unit_cell_factor(const SystemConfig& cfg) {
    return kImag * 4.0 * M_PI * cfg.unit_cell_len_x * cfg.unit_cell_len_y /
           (cfg.wavelength * cfg.wavelength);
}

Eigen::VectorXcd los_precoder(const SystemConfig& cfg, const RicianParams& rp) {
    Eigen::VectorXcd f = array_response_bs(cfg, rp.bs_departure);
    return f / f.norm();
}

std::complex<double> end_to_end_gain(const ChannelRealization& ch, const RisReflection& refl,
                                     const Eigen::VectorXcd& precoder) {
    if (ch.incident.cols() != precoder.size())
        throw std::invalid_argument("end_to_end_gain: precoder size mismatch");
    if (ch.incident.rows() != refl.phases.size() || ch.reflected.size() != refl.phases.size())
        throw std::invalid_argument("end_to_end_gain: reflection size mismatch");

    const Eigen::VectorXcd through = ch.incident * precoder;  // H_i f
    std::complex<double> sum = 0.0;
    for (Eigen::Index q = 0; q < refl.phases.size(); ++q)
        sum += std::conj(ch.reflected(q)) * std::exp(kImag * refl.phases(q)) * through(q);
    return refl.unit_cell_factor * sum;
}

double snr_from_gain(const SystemConfig& cfg, std::complex<double> gain) {
    return cfg.rx_gain * cfg.tx_gain * cfg.tx_power * std::norm(gain) / cfg.noise_power();
}

void write_channel_dump(const ChannelRealization& ch, std::ostream& out) {
    out << "component,row,col,re,im\n";
    char buf[128];
    for (Eigen::Index r = 0; r < ch.incident.rows(); ++r)
        for (Eigen::Index c = 0; c < ch.incident.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "incident,%ld,%ld,%.17g,%.17g\n",
                          static_cast<long>(r), static_cast<long>(c),
                          ch.incident(r, c).real(), ch.incident(r, c).imag());
            out << buf;
        }
    for (Eigen::Index r = 0; r < ch.reflected.size(); ++r) {
        std::snprintf(buf, sizeof buf, "reflected,%ld,0,%.17g,%.17g\n", static_cast<long>(r),
                      ch.reflected(r).real(), ch.reflected(r).imag());
        out << buf;
    }
}

}  // namespace risbt
