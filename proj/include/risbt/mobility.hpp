#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "risbt/scenario.hpp"

namespace risbt {

/// Random-direction trajectory in the coverage plane: straight segments,
/// direction redrawn from the inward-pointing range at each boundary hit.
struct Trajectory {
    std::vector<Vec3> waypoints;
    std::vector<double> arc_lengths;  // cumulative, arc_lengths[0] = 0
    double total_length = 0.0;
    double velocity = 0.0;
    uint64_t seed = 0;

    Vec3 position_at(double arc_length) const;
};

Trajectory generate_trajectory(const SystemConfig& cfg, double total_length, double velocity,
                               uint64_t seed);

void write_trajectory_csv(const Trajectory& traj, std::ostream& out, double step = 1.0);

}  // namespace risbt
