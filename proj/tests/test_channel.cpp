#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "risbt/channel.hpp"
#include "risbt/codebook.hpp"
#include "risbt/config_io.hpp"

using namespace risbt;

namespace {

// small surface keeps the statistical tests fast; the contracts hold for any Q
Scenario small_scenario() {
    Scenario sc = default_scenario();
    sc.system.num_unit_cells = 100;
    sc.system.num_bs_antennas = 8;
    return sc;
}

RicianParams user_at_center(const Scenario& sc) {
    RicianParams rp = RicianParams::for_user(sc.system, sc.system.area_center);
    rp.k_incident = sc.channel.k_incident;
    rp.k_reflected = sc.channel.k_reflected;
    rp.paths_incident = sc.channel.paths_incident;
    rp.paths_reflected = sc.channel.paths_reflected;
    return rp;
}

}  // namespace

TEST_CASE("steering vectors: broadside all-ones, unit modulus, self inner product") {
    const Scenario sc = small_scenario();
    const Aod broadside{0.0, 0.0};
    for (ArrayKind kind : {ArrayKind::RisArrival, ArrayKind::RisDeparture}) {
        const Eigen::VectorXcd v = array_response(sc.system, kind, broadside);
        REQUIRE(v.size() == 100);
        for (Eigen::Index q = 0; q < v.size(); ++q)
            CHECK(std::abs(v(q) - 1.0) < 1e-12);
    }

    const Aod slant{0.7, 2.1};
    const Eigen::VectorXcd a = array_response(sc.system, ArrayKind::RisArrival, slant);
    for (Eigen::Index q = 0; q < a.size(); ++q)
        CHECK(std::abs(a(q)) == doctest::Approx(1.0));
    CHECK(std::abs(a.dot(a)) == doctest::Approx(100.0));

    const Eigen::VectorXcd b = array_response_bs(sc.system, 0.4);
    CHECK(std::abs(b.dot(b)) == doctest::Approx(8.0));
}

TEST_CASE("free-space path loss at the area center") {
    const Scenario sc = default_scenario();
    // lambda = 0.010707 m, R = 102.47 m: (lambda / 4 pi R)^2 = 6.914e-11
    const double eta =
        free_space_pathloss(sc.system.wavelength, sc.system.area_center.norm());
    CHECK(eta == doctest::Approx(6.9139e-11).epsilon(1e-3));
}

TEST_CASE("channel generation is bit-identical under seed reuse") {
    const Scenario sc = small_scenario();
    const RicianParams rp = user_at_center(sc);
    const ChannelRealization a = generate_channels(sc.system, rp, 1234);
    const ChannelRealization b = generate_channels(sc.system, rp, 1234);
    CHECK((a.incident - b.incident).norm() == 0.0);
    CHECK((a.reflected - b.reflected).norm() == 0.0);
    const ChannelRealization c = generate_channels(sc.system, rp, 1235);
    CHECK((a.incident - c.incident).norm() > 0.0);
}

TEST_CASE("huge K-factor suppresses the scattered part") {
    const Scenario sc = small_scenario();
    RicianParams rp = user_at_center(sc);
    rp.k_incident = 1e12;
    rp.k_reflected = 1e12;
    const ChannelParts parts = generate_channel_parts(sc.system, rp, 77);
    CHECK(parts.incident_nlos.squaredNorm() / parts.incident_los.squaredNorm() < 1e-6);
    CHECK(parts.reflected_nlos.squaredNorm() / parts.reflected_los.squaredNorm() < 1e-6);
}

TEST_CASE("scattered-part normalization matches 1/(K+1)") {
    const Scenario sc = small_scenario();
    const RicianParams rp = user_at_center(sc);
    const double qn = 100.0 * 8.0;

    double acc = 0.0;
    const int seeds = 1000;
    for (int s = 0; s < seeds; ++s)
        acc += generate_channel_parts(sc.system, rp, 5000 + s).incident_nlos.squaredNorm() / qn;
    // expected 1 / (K + 1) = 0.2 within 5 %
    CHECK(acc / seeds == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("per-entry scattered power is independent of the path count") {
    const Scenario sc = small_scenario();
    for (int paths : {1, 6}) {
        RicianParams rp = user_at_center(sc);
        rp.paths_reflected = paths;
        double acc = 0.0;
        const int seeds = 4000;
        for (int s = 0; s < seeds; ++s) {
            const ChannelParts parts = generate_channel_parts(sc.system, rp, 9000 + s);
            acc += std::norm(parts.reflected_nlos(3));
        }
        const double mean = acc / seeds;
        // E|entry|^2 = 1/(K+1); |entry|^2 has std ~ 1/(K+1): 3 sigma band
        CHECK(std::abs(mean - 0.2) < 3.0 * 0.2 / std::sqrt(double(seeds)));
    }
}

TEST_CASE("zero scatterers with finite K leaves the scaled LoS part") {
    const Scenario sc = small_scenario();
    RicianParams rp = user_at_center(sc);
    rp.paths_incident = 0;
    rp.paths_reflected = 0;
    const ChannelRealization ch = generate_channels(sc.system, rp, 3);
    const double expected =
        ch.pathloss_reflected * (rp.k_reflected / (rp.k_reflected + 1.0)) * 100.0;
    CHECK(ch.reflected.squaredNorm() == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("pure-LoS aligned codeword reaches the closed-form gain") {
    const Scenario sc = small_scenario();
    RicianParams rp = user_at_center(sc);
    rp.k_incident = 250.0;
    rp.k_reflected = 16.0;

    // codeword canceling the LoS arrival and departure phases
    const Codeword cw = narrow_beam_codeword(sc.system, rp.reflected, rp.incident);
    const Eigen::VectorXcd f = los_precoder(sc.system, rp);

    // LoS-only prediction: sqrt(eta_i eta_r) |g| Q sqrt(N) K-normalizations
    RicianParams pure = rp;
    pure.paths_incident = 0;
    pure.paths_reflected = 0;
    const ChannelRealization los = generate_channels(sc.system, pure, 11);
    const double predicted = std::sqrt(los.pathloss_incident * los.pathloss_reflected) *
                             std::abs(unit_cell_factor(sc.system)) * 100.0 * std::sqrt(8.0) *
                             std::sqrt(rp.k_incident / (rp.k_incident + 1.0)) *
                             std::sqrt(rp.k_reflected / (rp.k_reflected + 1.0));
    const double measured = std::abs(end_to_end_gain(los, cw.reflection(sc.system), f));
    CHECK(measured == doctest::Approx(predicted).epsilon(1e-9));

    // with scatterers the LoS term still dominates for K >> 1
    const ChannelRealization ch = generate_channels(sc.system, rp, 11);
    const double noisy = std::abs(end_to_end_gain(ch, cw.reflection(sc.system), f));
    CHECK(noisy == doctest::Approx(predicted).epsilon(0.5));
}

TEST_CASE("global phase offsets and transmit power scaling") {
    const Scenario sc = small_scenario();
    const RicianParams rp = user_at_center(sc);
    const ChannelRealization ch = generate_channels(sc.system, rp, 21);
    const Eigen::VectorXcd f = los_precoder(sc.system, rp);

    RisReflection refl = narrow_beam_codeword(sc.system, rp.reflected, rp.incident)
                             .reflection(sc.system);
    const double gamma = snr_from_gain(sc.system, end_to_end_gain(ch, refl, f));

    RisReflection shifted = refl;
    shifted.phases.array() += 1.2345;
    CHECK(snr_from_gain(sc.system, end_to_end_gain(ch, shifted, f)) ==
          doctest::Approx(gamma).epsilon(1e-9));

    Scenario doubled = sc;
    doubled.system.tx_power *= 2.0;
    CHECK(snr_from_gain(doubled.system, end_to_end_gain(ch, refl, f)) ==
          doctest::Approx(2.0 * gamma).epsilon(1e-12));
}

TEST_CASE("dimension mismatches are rejected") {
    const Scenario sc = small_scenario();
    const RicianParams rp = user_at_center(sc);
    const ChannelRealization ch = generate_channels(sc.system, rp, 5);
    RisReflection refl = narrow_beam_codeword(sc.system, rp.reflected, rp.incident)
                             .reflection(sc.system);

    Eigen::VectorXcd bad_precoder = Eigen::VectorXcd::Ones(7);
    CHECK_THROWS_AS(end_to_end_gain(ch, refl, bad_precoder), std::invalid_argument);

    refl.phases = Eigen::VectorXd::Zero(99);
    CHECK_THROWS_AS(end_to_end_gain(ch, refl, los_precoder(sc.system, rp)),
                    std::invalid_argument);
}

TEST_CASE("channel dump format") {
    const Scenario sc = small_scenario();
    const ChannelRealization ch = generate_channels(sc.system, user_at_center(sc), 8);
    std::ostringstream out;
    write_channel_dump(ch, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "component,row,col,re,im");
    size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 100 * 8 + 100);
}
