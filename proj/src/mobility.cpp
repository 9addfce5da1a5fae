#include "risbt/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "risbt/rng.hpp"

namespace risbt {

namespace {

constexpr double kEps = 1e-9;

struct Box {
    double y_lo, y_hi, z_lo, z_hi;
    bool inside(double y, double z) const {
        return y >= y_lo - kEps && y <= y_hi + kEps && z >= z_lo - kEps && z <= z_hi + kEps;
    }
};

// Distance along (dy, dz) from (y, z) to the first boundary crossing.
double distance_to_boundary(const Box& b, double y, double z, double dy, double dz) {
    double t = std::numeric_limits<double>::infinity();
    if (dy > kEps) t = std::min(t, (b.y_hi - y) / dy);
    if (dy < -kEps) t = std::min(t, (b.y_lo - y) / dy);
    if (dz > kEps) t = std::min(t, (b.z_hi - z) / dz);
    if (dz < -kEps) t = std::min(t, (b.z_lo - z) / dz);
    return t;
}

}  // namespace

Trajectory generate_trajectory(const SystemConfig& cfg, double total_length, double velocity,
                               uint64_t seed) {
    if (total_length <= 0.0)
        throw std::invalid_argument("generate_trajectory: total_length must be > 0");

    const Box box{cfg.area_center.y - cfg.area_extent_y / 2.0,
                  cfg.area_center.y + cfg.area_extent_y / 2.0,
                  cfg.area_center.z - cfg.area_extent_z / 2.0,
                  cfg.area_center.z + cfg.area_extent_z / 2.0};
    const double x = cfg.area_center.x;

    Rng rng(seed);
    Trajectory traj;
    traj.total_length = total_length;
    traj.velocity = velocity;
    traj.seed = seed;

    double y = rng.uniform(box.y_lo, box.y_hi);
    double z = rng.uniform(box.z_lo, box.z_hi);
    double angle = rng.uniform(0.0, 2.0 * M_PI);

    traj.waypoints.push_back({x, y, z});
    traj.arc_lengths.push_back(0.0);

    double travelled = 0.0;
    while (travelled < total_length) {
        double dy = std::cos(angle);
        double dz = std::sin(angle);
        // Inward-direction resampling; rejection over the full circle.
        int guard = 0;
        while (distance_to_boundary(box, y, z, dy, dz) < kEps && guard++ < 1000) {
            angle = rng.uniform(0.0, 2.0 * M_PI);
            dy = std::cos(angle);
            dz = std::sin(angle);
        }
        double hop = distance_to_boundary(box, y, z, dy, dz);
        const double remaining = total_length - travelled;
        hop = std::min(hop, remaining);

        y = std::clamp(y + hop * dy, box.y_lo, box.y_hi);
        z = std::clamp(z + hop * dz, box.z_lo, box.z_hi);
        travelled += hop;
        traj.waypoints.push_back({x, y, z});
        traj.arc_lengths.push_back(travelled);

        angle = rng.uniform(0.0, 2.0 * M_PI);
    }
    return traj;
}

Vec3 Trajectory::position_at(double arc_length) const {
    if (arc_length < -kEps || arc_length > total_length + kEps)
        throw std::out_of_range("position_at: arc length outside trajectory");
    arc_length = std::clamp(arc_length, 0.0, total_length);

    const auto it =
        std::upper_bound(arc_lengths.begin(), arc_lengths.end(), arc_length);
    const size_t hi = std::min(static_cast<size_t>(it - arc_lengths.begin()),
                               arc_lengths.size() - 1);
    const size_t lo = hi - (hi > 0 ? 1 : 0);
    const double span = arc_lengths[hi] - arc_lengths[lo];
    const double t = span > 0.0 ? (arc_length - arc_lengths[lo]) / span : 0.0;
    const Vec3& a = waypoints[lo];
    const Vec3& b = waypoints[hi];
    return a + (b - a) * t;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out, double step) {
    out << "s,y,z\n";
    char buf[96];
    for (double s = 0.0; s <= traj.total_length; s += step) {
        const Vec3 p = traj.position_at(s);
        std::snprintf(buf, sizeof buf, "%.6f,%.9g,%.9g\n", s, p.y, p.z);
        out << buf;
    }
}

}  // namespace risbt
