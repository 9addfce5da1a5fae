#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "risbt/scenario.hpp"

namespace risbt {

struct ChannelDefaults {
    double k_incident = 4.0;
    double k_reflected = 4.0;
    int paths_incident = 6;
    int paths_reflected = 6;
};

struct CodebookParams {
    int root_size = 8;   // M0
    int branching = 4;   // k
    int levels = 5;      // L
    std::optional<std::pair<int, int>> grid_override;  // forces the level-1 split
};

/// Complete experiment scenario as loaded from a config file.
struct Scenario {
    SystemConfig system;
    TimingConfig timing;
    ChannelDefaults channel;
    CodebookParams codebook;
    double strictness = 1.0;
};

/// Reference scenario used by all presets (28 GHz, 15 dBm, 16 BS antennas,
/// Q = 3600, 100 m x 50 m area, K = 4, C = 6, alpha = 0.15, T_e = 40 T_p).
Scenario default_scenario();

struct ConfigResult {
    std::optional<Scenario> scenario;
    std::vector<std::string> errors;  // exhaustive, not first-failure

    bool ok() const { return errors.empty() && scenario.has_value(); }
};

/// Parses the flat `section.key = value` format. Unknown keys and
/// constraint violations are hard errors; all are reported together.
ConfigResult parse_scenario(std::istream& in);
ConfigResult load_scenario_file(const std::string& path);

/// Human-readable echo of derived quantities (wavelength, noise power,
/// pilot duration, grid split).
std::string describe_derived(const Scenario& sc);

}  // namespace risbt
