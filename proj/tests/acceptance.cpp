// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Monte-Carlo checks run at the reduced sample counts the
// criteria specify; see README for the full-scale figure runs.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "risbt/presets.hpp"

using namespace risbt;

namespace {

int failures = 0;

void report(const std::string& heading, const std::vector<CriterionResult>& results) {
    std::printf("--- %s\n", heading.c_str());
    for (const CriterionResult& c : results) {
        std::printf("[%s] criterion %-3s %s: measured %.6g (%s %.6g)\n",
                    c.pass ? "PASS" : "FAIL", c.id.c_str(), c.description.c_str(), c.measured,
                    c.comparison.c_str(), c.bound);
        if (!c.pass) ++failures;
    }
    std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
    // worker count for the Monte-Carlo criteria
    int workers = 1;
    if (argc > 1) workers = std::max(1, std::atoi(argv[1]));

    const Scenario sc = default_scenario();
    const uint64_t seed = 20240817;

    report("1. SNR scaling and saturation (>= 200 draws per size)",
           check_snr_scaling(sc, 200, seed, workers));
    report("2. regime classifier", check_regime_classifier(sc));
    report("3. overhead parabola (1000 random draws)", check_overhead_parabola(seed, 1000));
    report("4. velocity bounds", check_velocity_bounds(sc));
    {
        std::vector<CriterionResult> out = check_delay_crossover_analytic(sc);
        const std::vector<CriterionResult> sim =
            check_delay_crossover_simulated(sc, 100, seed, workers);
        out.insert(out.end(), sim.begin(), sim.end());
        report("5. feedback-delay crossover (analytic + >= 100 draws per curve)", out);
    }
    report("6. reliability regimes (>= 1000 frames)",
           check_reliability_regimes(sc, 1000, seed, workers));
    report("7. strategy ordering (exhaustive grid)", check_strategy_ordering(sc));
    report("8. appendix cross-checks (1000 random draws)",
           check_appendix_bounds(sc, seed, 1000));

    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion check(s) failed\n", failures);
    return 1;
}
