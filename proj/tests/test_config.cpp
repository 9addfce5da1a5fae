#include <doctest.h>

#include <fstream>
#include <sstream>

#include "risbt/config_io.hpp"

using namespace risbt;

namespace {

std::string repo_config_path() {
    // tests run from the build tree; the fixture lives in the source tree
    return std::string(RISBT_SOURCE_DIR) + "/configs/default.cfg";
}

}  // namespace

TEST_CASE("shipped default config validates cleanly and matches the built-in scenario") {
    const ConfigResult result = load_scenario_file(repo_config_path());
    for (const std::string& e : result.errors) MESSAGE(e);
    REQUIRE(result.ok());

    const Scenario& file = *result.scenario;
    const Scenario code = default_scenario();
    CHECK(file.system.num_unit_cells == code.system.num_unit_cells);
    CHECK(file.system.num_bs_antennas == code.system.num_bs_antennas);
    CHECK(file.system.tx_power == doctest::Approx(code.system.tx_power).epsilon(1e-9));
    CHECK(file.system.wavelength == doctest::Approx(code.system.wavelength).epsilon(1e-12));
    CHECK(file.system.noise_psd == doctest::Approx(code.system.noise_psd).epsilon(1e-6));
    CHECK(file.system.noise_figure ==
          doctest::Approx(code.system.noise_figure).epsilon(1e-6));
    CHECK(file.system.area_extent_y == code.system.area_extent_y);
    CHECK(file.system.area_extent_z == code.system.area_extent_z);
    CHECK(file.system.bs_position.y == code.system.bs_position.y);
    CHECK(file.system.area_center.x == code.system.area_center.x);
    CHECK(file.timing.frame_factor == code.timing.frame_factor);
    CHECK(file.timing.feedback_delay == code.timing.feedback_delay);
    CHECK(file.timing.channel_estimation_overhead ==
          doctest::Approx(code.timing.channel_estimation_overhead));
    CHECK(file.channel.k_incident == code.channel.k_incident);
    CHECK(file.channel.paths_incident == code.channel.paths_incident);
    CHECK(file.codebook.root_size == code.codebook.root_size);
    CHECK(file.codebook.branching == code.codebook.branching);
    CHECK(file.codebook.levels == code.codebook.levels);
}

TEST_CASE("derived quantities are consistent") {
    const Scenario sc = default_scenario();
    CHECK(sc.system.wavelength == doctest::Approx(299792458.0 / 28e9).epsilon(1e-12));
    CHECK(sc.system.unit_cell_len_x == doctest::Approx(sc.system.wavelength / 2));
    CHECK(sc.system.unit_cell_gain == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(sc.timing.pilot_symbol_duration ==
          doctest::Approx(1.0 / sc.system.pilot_bandwidth));
    const std::string echo = describe_derived(sc);
    CHECK(echo.find("wavelength") != std::string::npos);
    CHECK(echo.find("noise_power") != std::string::npos);
}

TEST_CASE("non-square Q is rejected with a named error") {
    std::istringstream in("ris.num_unit_cells = 3601\n");
    const ConfigResult result = parse_scenario(in);
    REQUIRE_FALSE(result.ok());
    bool found = false;
    for (const std::string& e : result.errors)
        found = found || e.find("perfect square") != std::string::npos;
    CHECK(found);
}

TEST_CASE("negative response time error names the key") {
    std::istringstream in("timing.ris_response_time = -1e-6\n");
    const ConfigResult result = parse_scenario(in);
    REQUIRE_FALSE(result.ok());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].find("timing.ris_response_time") != std::string::npos);
}

TEST_CASE("unknown keys are hard errors and reporting is exhaustive") {
    std::istringstream in(
        "no.such_key = 1\n"
        "ris.num_unit_cells = 17\n"
        "timing.frame_factor = 0\n");
    const ConfigResult result = parse_scenario(in);
    REQUIRE_FALSE(result.ok());
    CHECK(result.errors.size() == 3);
}

TEST_CASE("comments and blank lines are ignored") {
    std::istringstream in(
        "# scenario override\n"
        "\n"
        "ris.num_unit_cells = 1600   # smaller surface\n");
    const ConfigResult result = parse_scenario(in);
    REQUIRE(result.ok());
    CHECK(result.scenario->system.num_unit_cells == 1600);
}

TEST_CASE("grid override must factor the root size") {
    std::istringstream in(
        "codebook.grid_count_x = 2\n"
        "codebook.grid_count_y = 4\n");
    const ConfigResult good = parse_scenario(in);
    REQUIRE(good.ok());
    REQUIRE(good.scenario->codebook.grid_override.has_value());
    CHECK(good.scenario->codebook.grid_override->first == 2);

    std::istringstream bad_in("codebook.grid_count_x = 3\ncodebook.grid_count_y = 4\n");
    const ConfigResult bad = parse_scenario(bad_in);
    CHECK_FALSE(bad.ok());
}
