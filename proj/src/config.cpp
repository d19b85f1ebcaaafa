#include "wcb/config.hpp"

#include "wcb/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <set>

namespace wcb {

using ordered_json = nlohmann::ordered_json;

std::string eligibility_to_string(const DividendEligibility& e) {
    if (e.kind == DividendEligibility::Kind::all_unassigned) return "all_unassigned";
    return "min_consecutive:" + std::to_string(e.min_rounds);
}

DividendEligibility eligibility_from_string(const std::string& s) {
    DividendEligibility e;
    if (s == "all_unassigned") return e;
    const std::string prefix = "min_consecutive:";
    if (s.rfind(prefix, 0) == 0) {
        e.kind = DividendEligibility::Kind::min_consecutive;
        try {
            e.min_rounds = std::stoi(s.substr(prefix.size()));
        } catch (const std::exception&) {
            throw DataError("dividend_eligibility: cannot parse '" + s + "'");
        }
        if (e.min_rounds < 1)
            throw DataError("dividend_eligibility: min_consecutive count must be >= 1");
        return e;
    }
    throw DataError("dividend_eligibility must be 'all_unassigned' or 'min_consecutive:<k>'");
}

void validate_config(const SimulationConfig& c) {
    auto fail = [](const std::string& m) { throw DataError("config: " + m); };
    if (c.rounds < 1) fail("rounds must be >= 1");
    if (!(c.round_length > 0.0)) fail("round_length must be > 0");
    if (c.replications < 1) fail("replications must be >= 1");
    if (!(c.task_rate > 0.0)) fail("task_rate must be > 0");
    if (!(c.volunteer_rate > 0.0)) fail("volunteer_rate must be > 0");
    if (!(c.gamma > 0.0)) fail("gamma must be > 0");
    if (c.omega < 0.0 || c.omega > 1.0) fail("omega must lie in [0,1]");
    if (c.threshold < 0.0 || c.threshold > 1.0) fail("threshold must lie in [0,1]");
    if (!(c.alpha > 0.0) || c.alpha > 1.0) fail("alpha must lie in (0,1]");
    if (!(c.newcomer_alpha > 0.0) || c.newcomer_alpha > 1.0)
        fail("newcomer_alpha must lie in (0,1]");
    try {
        validate_weights(c.weights);
    } catch (const std::exception& e) {
        fail(e.what());
    }
    if (c.policy != "vrave" && c.policy != "fixed" && c.policy != "training" &&
        c.policy != "increasing")
        fail("policy must be one of vrave|fixed|training|increasing");
    if (c.initial_contingency < 0.0) fail("initial_contingency must be >= 0");
    if (c.catalog_size < 1) fail("catalog_size must be >= 1");
    if (!(c.volunteer_stay_mean > 0.0)) fail("volunteer_stay_mean must be > 0");
    if (c.arrival_mode != "poisson" && c.arrival_mode != "dataset")
        fail("arrival_mode must be 'poisson' or 'dataset'");
    if (c.threads < 0) fail("threads must be >= 0");
    if (c.kernel_backend != "auto" && c.kernel_backend != "scalar" &&
        c.kernel_backend != "avx2")
        fail("kernel_backend must be auto|scalar|avx2");
}

SimulationConfig parse_config_json(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw DataError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DataError("config: top-level JSON value must be an object");

    SimulationConfig c;
    const std::set<std::string> known = {
        "rounds",        "round_length",   "replications",       "task_rate",
        "volunteer_rate", "gamma",          "omega",              "threshold",
        "alpha",         "newcomer_alpha", "weights",            "policy",
        "dividend_eligibility", "initial_contingency", "rng_seed", "catalog_size",
        "volunteer_stay_mean", "baseline_attrition", "policy_base", "policy_slope", "tasks_csv",
        "volunteers_csv", "arrival_mode",   "threads",            "kernel_backend"};
    for (const auto& [key, value] : j.items()) {
        if (known.count(key) == 0) throw DataError("config: unknown key '" + key + "'");
        (void)value;
    }

    try {
        c.rounds = j.value("rounds", c.rounds);
        c.round_length = j.value("round_length", c.round_length);
        c.replications = j.value("replications", c.replications);
        c.task_rate = j.value("task_rate", c.task_rate);
        c.volunteer_rate = j.value("volunteer_rate", c.volunteer_rate);
        c.gamma = j.value("gamma", c.gamma);
        c.omega = j.value("omega", c.omega);
        c.threshold = j.value("threshold", c.threshold);
        c.alpha = j.value("alpha", c.alpha);
        c.newcomer_alpha = j.value("newcomer_alpha", c.newcomer_alpha);
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            for (const auto& [key, value] : w.items()) {
                if (key != "w_skill" && key != "w_willingness" && key != "w_cost")
                    throw DataError("config: unknown weights key '" + key + "'");
                (void)value;
            }
            c.weights.w_skill = w.value("w_skill", c.weights.w_skill);
            c.weights.w_willingness = w.value("w_willingness", c.weights.w_willingness);
            c.weights.w_cost = w.value("w_cost", c.weights.w_cost);
        }
        c.policy = j.value("policy", c.policy);
        if (j.contains("dividend_eligibility"))
            c.dividend_eligibility =
                eligibility_from_string(j.at("dividend_eligibility").get<std::string>());
        c.initial_contingency = j.value("initial_contingency", c.initial_contingency);
        c.rng_seed = j.value("rng_seed", c.rng_seed);
        c.catalog_size = j.value("catalog_size", c.catalog_size);
        c.volunteer_stay_mean = j.value("volunteer_stay_mean", c.volunteer_stay_mean);
        c.baseline_attrition = j.value("baseline_attrition", c.baseline_attrition);
        c.policy_base = j.value("policy_base", c.policy_base);
        c.policy_slope = j.value("policy_slope", c.policy_slope);
        c.tasks_csv = j.value("tasks_csv", c.tasks_csv);
        c.volunteers_csv = j.value("volunteers_csv", c.volunteers_csv);
        c.arrival_mode = j.value("arrival_mode", c.arrival_mode);
        c.threads = j.value("threads", c.threads);
        c.kernel_backend = j.value("kernel_backend", c.kernel_backend);
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    }

    if (const char* env = std::getenv("WCB_SEED")) {
        try {
            c.rng_seed = std::stoull(env);
        } catch (const std::exception&) {
            throw DataError("WCB_SEED: cannot parse '" + std::string(env) + "'");
        }
    }
    validate_config(c);
    return c;
}

SimulationConfig load_config_file(const std::string& path) {
    return parse_config_json(read_file(path));
}

std::string config_to_json(const SimulationConfig& c) {
    ordered_json j;
    j["rounds"] = c.rounds;
    j["round_length"] = c.round_length;
    j["replications"] = c.replications;
    j["task_rate"] = c.task_rate;
    j["volunteer_rate"] = c.volunteer_rate;
    j["gamma"] = c.gamma;
    j["omega"] = c.omega;
    j["threshold"] = c.threshold;
    j["alpha"] = c.alpha;
    j["newcomer_alpha"] = c.newcomer_alpha;
    j["weights"] = {{"w_skill", c.weights.w_skill},
                    {"w_willingness", c.weights.w_willingness},
                    {"w_cost", c.weights.w_cost}};
    j["policy"] = c.policy;
    j["dividend_eligibility"] = eligibility_to_string(c.dividend_eligibility);
    j["initial_contingency"] = c.initial_contingency;
    j["rng_seed"] = c.rng_seed;
    j["catalog_size"] = c.catalog_size;
    j["volunteer_stay_mean"] = c.volunteer_stay_mean;
    j["baseline_attrition"] = c.baseline_attrition;
    j["policy_base"] = c.policy_base;
    j["policy_slope"] = c.policy_slope;
    j["tasks_csv"] = c.tasks_csv;
    j["volunteers_csv"] = c.volunteers_csv;
    j["arrival_mode"] = c.arrival_mode;
    j["threads"] = c.threads;
    j["kernel_backend"] = c.kernel_backend;
    return j.dump(2);
}

} // namespace wcb
