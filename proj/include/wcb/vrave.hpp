#pragma once
// Per-round retention pass: dividends for unassigned volunteers, satisfaction
// scoring, and the drop/retain split against a threshold.

#include "wcb/domain.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace wcb {

struct DividendEligibility {
    enum class Kind { all_unassigned, min_consecutive };
    Kind kind = Kind::all_unassigned;
    // Minimum length of the current unassigned streak, counting this round.
    int min_rounds = 2;
};

struct RetentionConfig {
    double gamma = 0.5;
    double omega = 0.5;
    DividendEligibility eligibility;
    // Baselines evaluate satisfaction for reporting but never pay dividends.
    bool pay_dividends = true;
};

struct RetentionDecision {
    double dividend = 0.0;
    double satisfaction = 0.0;
    bool retained = true;
};

struct RetentionOutcome {
    std::set<std::string> dropped;
    std::set<std::string> retained;
    double total_dividend = 0.0;
    std::map<std::string, RetentionDecision> per_volunteer;
    // False when the pass was suppressed (round 1, or no volunteer carries a
    // positive prior potential yet); everyone is retained and nothing is paid.
    bool evaluated = false;
};

struct CohortMember {
    const Volunteer* volunteer = nullptr;
    VolunteerLedger* ledger = nullptr;
};

// Active volunteers not appearing anywhere in the map, in id order. Throws
// std::invalid_argument when the map references ids outside the cohort.
std::vector<std::string> unassigned_set(const AllocationMap& map,
                                        std::span<const CohortMember> cohort);

// One retention pass. Reads the fund balance but never deducts from it (the
// round driver owns the deduction); pays dividends into the ledgers'
// cumulative income when cfg.pay_dividends is set. Volunteers are dropped on
// satisfaction strictly below the threshold.
RetentionOutcome run_vrave(const ContingencyLedger& fund, int round,
                           const AllocationMap& map,
                           std::span<const CohortMember> cohort, double threshold,
                           const RetentionConfig& cfg);

} // namespace wcb
