#pragma once
// Round-driven simulation: arrivals and departures, potential refresh, greedy
// assignment, retention, contingency flow, and multi-replication experiments.

#include "wcb/assignment.hpp"
#include "wcb/config.hpp"
#include "wcb/domain.hpp"
#include "wcb/io.hpp"
#include "wcb/report.hpp"
#include "wcb/rng.hpp"
#include "wcb/stats.hpp"
#include "wcb/vrave.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wcb {

// Replication failure (invariant violation mid-run).
struct SimAbort : std::runtime_error {
    explicit SimAbort(const std::string& what) : std::runtime_error(what) {}
};

// What a named policy means operationally: how assigned volunteers are paid
// and whether the retention pass acts (baselines evaluate satisfaction for
// reporting but never pay dividends nor drop anyone).
struct SimPolicy {
    std::string name;
    RemunerationPolicy remuneration;
    bool run_retention = false; // the platform's own retention pass (vrave)
    bool pay_dividends = false;
    bool attrition = false;     // dissatisfied unassigned volunteers leave
};

// `derived_base` anchors the training/increasing schedules when the config
// leaves them on auto (the template source's average expense).
SimPolicy resolve_policy(const SimulationConfig& cfg, const std::string& name,
                         double derived_base);

// ---------------------------------------------------------------------------
// World generation

struct ReplicationWorld {
    SkillCatalog catalog;
    std::vector<Task> tasks;           // sorted by arrival time
    std::vector<Volunteer> volunteers; // sorted by arrival time
    double mean_expense = 0.0;         // template average, anchors baselines
};

// Poisson arrival schedule over [0, span): one count per unit of time, each
// stamp uniform within its unit. Returned sorted ascending.
std::vector<double> poisson_arrival_stamps(double rate, double span, Rng& rng);

// Synthetic or dataset-templated world for one replication. When `dataset` is
// non-null its rows are resampled with replacement (arrival_mode "poisson") or
// replayed as-is (arrival_mode "dataset").
ReplicationWorld generate_world(const SimulationConfig& cfg, const Dataset* dataset,
                                std::uint64_t seed);

// Fixed-size synthetic dataset (backs `wcb gen`): exact entity counts with
// arrival stamps uniform over [0, span).
Dataset generate_dataset(int tasks, int volunteers, int catalog_size, double span,
                         double stay_mean, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Per-replication run

struct ReplicationResult {
    int replication = 0;
    std::uint64_t seed = 0;
    std::vector<RoundReport> rounds;
    std::vector<RoundAudit> audits;

    long total_retained = 0;     // decision-events summed over rounds
    long distinct_retained = 0;  // volunteers retained at least once
    long total_dropped = 0;
    long total_completed = 0;
    double paid_money = 0.0;  // remunerations + dividends
    double paid_heads = 0.0;  // distinct volunteers paid, summed over rounds

    double sat_sum = 0.0;     // pooled satisfaction scores
    long sat_count = 0;
    std::vector<double> satisfaction_scores; // filled only when requested

    double total_payments = 0.0;
    double total_dividends = 0.0;
    double total_completed_budget = 0.0;
    double final_contingency = 0.0;
    double conservation_error = 0.0;

    std::vector<AllocationMap> maps;                 // when requested
    std::vector<std::set<std::string>> dropped_ids;  // per round, when requested
};

struct RunOptions {
    bool disable_retention = false; // calibration: dividends flow, nobody drops
    bool keep_maps = false;
    bool collect_scores = false;
};

ReplicationResult run_replication(const ReplicationWorld& world,
                                  const SimulationConfig& cfg, const SimPolicy& policy,
                                  const RunOptions& opt, int replication,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments

struct PolicyAggregate {
    std::string policy;
    SummaryStats retained;         // per-replication round totals
    SummaryStats retained_distinct; // per-replication distinct volunteers
    SummaryStats completed;
    SummaryStats avg_remuneration; // per-replication pooled averages
    SummaryStats satisfaction;     // per-replication pooled means
    double satisfaction_pooled_mean = 0.0;
    long satisfaction_pooled_count = 0;
    double dividends_mean = 0.0;
    double max_conservation_error = 0.0;
};

struct ExperimentBundle {
    SimulationConfig config;
    std::string policy;
    bool retention_disabled = false;
    std::string kernel_backend;
    std::vector<ReplicationResult> replications;
    PolicyAggregate aggregate;
};

struct ExperimentOptions {
    std::string policy;             // empty: use config.policy
    bool disable_retention = false;
    bool keep_maps = false;
    bool collect_scores = false;
    const Dataset* dataset = nullptr; // preloaded templates (optional)
};

// Runs `config.replications` independent replications (replication k is
// seeded with rng_seed xor k), in parallel across config.threads workers.
// Any replication abort fails the whole experiment, naming the replication.
ExperimentBundle run_experiment(const SimulationConfig& cfg,
                                const ExperimentOptions& opt = {});

PolicyAggregate aggregate_results(const std::string& policy,
                                  std::span<const ReplicationResult> reps);

} // namespace wcb
