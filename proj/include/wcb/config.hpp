#pragma once
// Run configuration: one JSON document mirroring these field names. Unknown
// keys are rejected so typos fail loudly instead of silently defaulting.

#include "wcb/assignment.hpp"
#include "wcb/vrave.hpp"

#include <cstdint>
#include <string>

namespace wcb {

struct SimulationConfig {
    int rounds = 6;
    double round_length = 50.0;       // logical time units per round
    int replications = 50;
    double task_rate = 5.0;           // Poisson arrivals per unit
    double volunteer_rate = 75.0;     // Poisson arrivals per unit
    double gamma = 0.5;               // dividend scaling
    double omega = 0.5;               // satisfaction blend weight
    double threshold = 0.75;          // retention cut
    double alpha = 0.5;               // veteran aging constant
    double newcomer_alpha = 0.1;      // newcomer aging constant
    UtilityWeights weights;
    std::string policy = "vrave";     // vrave | fixed | training | increasing
    DividendEligibility dividend_eligibility;
    double initial_contingency = 0.0;
    std::uint64_t rng_seed = 42;

    // Synthetic world shape.
    int catalog_size = 50;
    double volunteer_stay_mean = 150.0; // mean availability window, time units

    // Whether dissatisfied unassigned volunteers quit the platform under the
    // baseline policies too (they are still never paid dividends there).
    bool baseline_attrition = true;

    // Baseline pay schedule; non-positive base / negative slope mean "derive"
    // (base = average expense of the template source, slope = base/6).
    double policy_base = 0.0;
    double policy_slope = -1.0;

    // Optional dataset templates; empty means fully parametric sampling.
    std::string tasks_csv;
    std::string volunteers_csv;
    std::string arrival_mode = "poisson"; // poisson | dataset (replay stamps)

    int threads = 0;                  // 0 = hardware concurrency
    std::string kernel_backend = "auto";
};

// Throws DataError on malformed JSON, unknown keys or invalid values. The
// WCB_SEED environment variable, when set, overrides rng_seed.
SimulationConfig parse_config_json(const std::string& json_text);
SimulationConfig load_config_file(const std::string& path);

// Full effective-configuration echo (every field, defaults included).
std::string config_to_json(const SimulationConfig& cfg);

void validate_config(const SimulationConfig& cfg); // throws DataError

std::string eligibility_to_string(const DividendEligibility& e);
DividendEligibility eligibility_from_string(const std::string& s); // throws DataError

} // namespace wcb
