#include "risbt/config_io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace risbt {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

struct ParseState {
    Scenario sc;
    double carrier_frequency = 28.0e9;
    double unit_cell_len_x = 0.0;  // 0 = half-wavelength default
    double unit_cell_len_y = 0.0;
    double bs_antenna_spacing = 0.0;
    double unit_cell_gain = 0.0;
    int grid_count_x = 0;
    int grid_count_y = 0;
};

using Setter = std::function<std::string(ParseState&, const std::string&)>;

std::string set_double(double& slot, const std::string& value) {
    std::istringstream in(value);
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof()) return "not a number";
    slot = v;
    return {};
}

std::string set_int(int& slot, const std::string& value) {
    std::istringstream in(value);
    long v = 0;
    if (!(in >> v) || !(in >> std::ws).eof()) return "not an integer";
    slot = static_cast<int>(v);
    return {};
}

const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = {
        {"bs.position_x", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.bs_position.x, v); }},
        {"bs.position_y", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.bs_position.y, v); }},
        {"bs.position_z", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.bs_position.z, v); }},
        {"bs.num_antennas", [](ParseState& s, const std::string& v) { return set_int(s.sc.system.num_bs_antennas, v); }},
        {"bs.antenna_spacing", [](ParseState& s, const std::string& v) { return set_double(s.bs_antenna_spacing, v); }},
        {"area.center_x", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.area_center.x, v); }},
        {"area.center_y", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.area_center.y, v); }},
        {"area.center_z", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.area_center.z, v); }},
        {"area.extent_y", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.area_extent_y, v); }},
        {"area.extent_z", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.area_extent_z, v); }},
        {"ris.num_unit_cells", [](ParseState& s, const std::string& v) { return set_int(s.sc.system.num_unit_cells, v); }},
        {"ris.area_factor", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.area_factor, v); }},
        {"ris.unit_cell_len_x", [](ParseState& s, const std::string& v) { return set_double(s.unit_cell_len_x, v); }},
        {"ris.unit_cell_len_y", [](ParseState& s, const std::string& v) { return set_double(s.unit_cell_len_y, v); }},
        {"ris.unit_cell_gain", [](ParseState& s, const std::string& v) { return set_double(s.unit_cell_gain, v); }},
        {"radio.carrier_frequency", [](ParseState& s, const std::string& v) { return set_double(s.carrier_frequency, v); }},
        {"radio.tx_power", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.tx_power, v); }},
        {"radio.tx_gain", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.tx_gain, v); }},
        {"radio.rx_gain", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.rx_gain, v); }},
        {"radio.noise_psd", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.noise_psd, v); }},
        {"radio.noise_figure", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.noise_figure, v); }},
        {"radio.pilot_bandwidth", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.pilot_bandwidth, v); }},
        {"training.min_snr", [](ParseState& s, const std::string& v) { return set_double(s.sc.system.min_training_snr, v); }},
        {"training.strictness", [](ParseState& s, const std::string& v) { return set_double(s.sc.strictness, v); }},
        {"timing.ris_response_time", [](ParseState& s, const std::string& v) { return set_double(s.sc.timing.ris_response_time, v); }},
        {"timing.feedback_delay", [](ParseState& s, const std::string& v) { return set_double(s.sc.timing.feedback_delay, v); }},
        {"timing.channel_estimation_overhead", [](ParseState& s, const std::string& v) { return set_double(s.sc.timing.channel_estimation_overhead, v); }},
        {"timing.frame_factor", [](ParseState& s, const std::string& v) { return set_double(s.sc.timing.frame_factor, v); }},
        {"timing.user_velocity", [](ParseState& s, const std::string& v) { return set_double(s.sc.timing.user_velocity, v); }},
        {"channel.k_factor_incident", [](ParseState& s, const std::string& v) { return set_double(s.sc.channel.k_incident, v); }},
        {"channel.k_factor_reflected", [](ParseState& s, const std::string& v) { return set_double(s.sc.channel.k_reflected, v); }},
        {"channel.nlos_paths_incident", [](ParseState& s, const std::string& v) { return set_int(s.sc.channel.paths_incident, v); }},
        {"channel.nlos_paths_reflected", [](ParseState& s, const std::string& v) { return set_int(s.sc.channel.paths_reflected, v); }},
        {"codebook.root_size", [](ParseState& s, const std::string& v) { return set_int(s.sc.codebook.root_size, v); }},
        {"codebook.branching", [](ParseState& s, const std::string& v) { return set_int(s.sc.codebook.branching, v); }},
        {"codebook.levels", [](ParseState& s, const std::string& v) { return set_int(s.sc.codebook.levels, v); }},
        {"codebook.grid_count_x", [](ParseState& s, const std::string& v) { return set_int(s.grid_count_x, v); }},
        {"codebook.grid_count_y", [](ParseState& s, const std::string& v) { return set_int(s.grid_count_y, v); }},
    };
    return table;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

void validate(const ParseState& st, std::vector<std::string>& errors) {
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    const SystemConfig& sys = st.sc.system;
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(sys.num_unit_cells))));
    require(sys.num_unit_cells > 0 && side * side == sys.num_unit_cells,
            "ris.num_unit_cells: Q must be a perfect square");
    require(sys.num_bs_antennas > 0, "bs.num_antennas: must be positive");
    require(st.carrier_frequency > 0.0, "radio.carrier_frequency: must be positive");
    require(sys.tx_power > 0.0, "radio.tx_power: must be positive");
    require(sys.tx_gain > 0.0, "radio.tx_gain: must be positive");
    require(sys.rx_gain > 0.0, "radio.rx_gain: must be positive");
    require(sys.noise_psd > 0.0, "radio.noise_psd: must be positive");
    require(sys.noise_figure > 0.0, "radio.noise_figure: must be positive");
    require(sys.pilot_bandwidth > 0.0, "radio.pilot_bandwidth: must be positive");
    require(sys.area_factor > 0.0, "ris.area_factor: must be positive");
    require(sys.min_training_snr > 0.0, "training.min_snr: must be positive");
    require(sys.area_extent_y > 0.0, "area.extent_y: must be positive");
    require(sys.area_extent_z > 0.0, "area.extent_z: must be positive");
    require(st.unit_cell_len_x >= 0.0, "ris.unit_cell_len_x: must be nonnegative");
    require(st.unit_cell_len_y >= 0.0, "ris.unit_cell_len_y: must be nonnegative");

    const TimingConfig& t = st.sc.timing;
    require(t.ris_response_time >= 0.0, "timing.ris_response_time: must be nonnegative");
    require(t.feedback_delay >= 0.0, "timing.feedback_delay: must be nonnegative");
    require(t.channel_estimation_overhead >= 0.0,
            "timing.channel_estimation_overhead: must be nonnegative");
    require(t.frame_factor > 0.0, "timing.frame_factor: must be positive");
    require(t.user_velocity >= 0.0, "timing.user_velocity: must be nonnegative");

    const ChannelDefaults& ch = st.sc.channel;
    require(ch.k_incident >= 0.0, "channel.k_factor_incident: must be nonnegative");
    require(ch.k_reflected >= 0.0, "channel.k_factor_reflected: must be nonnegative");
    require(ch.paths_incident >= 0, "channel.nlos_paths_incident: must be nonnegative");
    require(ch.paths_reflected >= 0, "channel.nlos_paths_reflected: must be nonnegative");

    const CodebookParams& cb = st.sc.codebook;
    require(cb.root_size >= 1, "codebook.root_size: must be >= 1");
    require(cb.levels >= 1, "codebook.levels: must be >= 1");
    if (cb.levels > 1) {
        const int split = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cb.branching))));
        require(split >= 2 && split * split == cb.branching,
                "codebook.branching: must be a square number >= 4");
    }
    require(st.sc.strictness >= 1.0, "training.strictness: must be >= 1");
    require((st.grid_count_x == 0) == (st.grid_count_y == 0),
            "codebook.grid_count_x/grid_count_y: set both or neither");
    if (st.grid_count_x > 0 && st.grid_count_y > 0)
        require(st.grid_count_x * st.grid_count_y == st.sc.codebook.root_size,
                "codebook.grid_count_x * grid_count_y must equal codebook.root_size");
}

}  // namespace

Scenario default_scenario() {
    ParseState st;
    st.sc.system.wavelength = kSpeedOfLight / st.carrier_frequency;
    st.sc.system.apply_wavelength_defaults();
    st.sc.timing.pilot_symbol_duration = st.sc.system.pilot_symbol_duration();
    return st.sc;
}

ConfigResult parse_scenario(std::istream& in) {
    ConfigResult result;
    ParseState st;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            result.errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        const auto& table = key_table();
        const auto it = table.find(key);
        if (it == table.end()) {
            result.errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            continue;
        }
        const std::string err = it->second(st, value);
        if (!err.empty())
            result.errors.push_back("line " + std::to_string(lineno) + ": " + key + ": " + err);
    }

    validate(st, result.errors);
    if (!result.errors.empty()) return result;

    st.sc.system.wavelength = kSpeedOfLight / st.carrier_frequency;
    st.sc.system.unit_cell_len_x = st.unit_cell_len_x;
    st.sc.system.unit_cell_len_y = st.unit_cell_len_y;
    st.sc.system.bs_antenna_spacing = st.bs_antenna_spacing;
    st.sc.system.unit_cell_gain = st.unit_cell_gain;
    st.sc.system.apply_wavelength_defaults();
    st.sc.timing.pilot_symbol_duration = st.sc.system.pilot_symbol_duration();
    if (st.grid_count_x > 0)
        st.sc.codebook.grid_override = std::make_pair(st.grid_count_x, st.grid_count_y);
    result.scenario = st.sc;
    return result;
}

ConfigResult load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult r;
        r.errors.push_back("cannot open config file: " + path);
        return r;
    }
    return parse_scenario(in);
}

std::string describe_derived(const Scenario& sc) {
    std::ostringstream out;
    const auto [mx, my] = factorize_level(sc.codebook.root_size, sc.system.area_extent_y,
                                          sc.system.area_extent_z);
    out << "wavelength = " << sc.system.wavelength << " m\n"
        << "noise_power = " << sc.system.noise_power() << " W\n"
        << "pilot_symbol_duration = " << sc.system.pilot_symbol_duration() << " s\n"
        << "unit_cell_len = " << sc.system.unit_cell_len_x << " m x "
        << sc.system.unit_cell_len_y << " m\n"
        << "unit_cell_gain = " << sc.system.unit_cell_gain << "\n"
        << "level_1_grid = " << mx << " x " << my << "\n";
    return out.str();
}

}  // namespace risbt
