#pragma once
// Per-round metrics record shared by the harness and the output layer.

#include <string>
#include <vector>

namespace wcb {

struct RoundReport {
    int round = 0;
    std::string policy;
    long completed_tasks = 0;
    long retained = 0;            // retention decisions in favor (measured for baselines)
    long dropped = 0;             // decisions against; baselines never act on them
    long newcomers_admitted = 0;
    double total_dividend = 0.0;
    double avg_remuneration = 0.0; // money paid this round / volunteers paid
    double satisfaction_mean = 0.0;
    double satisfaction_median = 0.0;
    double satisfaction_iqr = 0.0;
    double contingency_balance = 0.0; // after the round's dividend deduction
};

// Internal per-round accounting used by invariants and tests; not serialized.
struct RoundAudit {
    int round = 0;
    long admitted = 0;
    long departed = 0;
    long expired_tasks = 0;
    long actual_drops = 0;   // 0 under baselines
    long active_end = 0;
    long open_tasks_end = 0;
};

} // namespace wcb
