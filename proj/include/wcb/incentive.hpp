#pragma once
// Participation dividends, cumulative income, satisfaction scores and the
// contingency fund replenishment rule.

#include "wcb/domain.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>

namespace wcb {

// Frozen cohort snapshot for one round's dividend computation. The potentials
// are the values from the previous round (0 for volunteers who just joined);
// `recipient_set` is the unassigned set, which is also the normalization
// denominator. An eligibility gate narrower than the recipient set simply
// skips calls for ineligible volunteers, leaving the denominator intact.
struct DividendContext {
    double contingency_balance = 0.0;                  // U
    double gamma = 0.5;                                // scaling parameter
    std::map<std::string, double> cohort_potentials;   // all active volunteers
    std::set<std::string> recipient_set;               // unassigned volunteers

    double cohort_max() const;        // max over cohort_potentials, 0 if empty
    double share_sum() const;         // sum of normalized shares over recipients

private:
    // The snapshot is frozen once dividends start flowing; the reductions are
    // cached on first use (single consumer, per the round loop's model).
    mutable double max_cache_ = -1.0;
    mutable double sum_cache_ = -1.0;
};

// gamma * p_v * U / sum(p_w over recipients), p_x = potential / cohort max.
// Returns 0 when the cohort max is 0. Throws std::invalid_argument when the
// volunteer is not in the recipient set.
double dividend(const std::string& volunteer_id, const DividendContext& ctx);

// Sum of dividend() over the whole recipient set. Equals gamma * U (to
// rounding) whenever the cohort max is positive and some recipient has a
// positive potential.
double total_dividend(const DividendContext& ctx);

// CI(v,r) = CI(v,r-1) + remuneration + dividend. Throws std::domain_error on
// negative payments.
void update_cumulative_income(VolunteerLedger& ledger, double remuneration_paid,
                              double dividend_paid);

struct SatisfactionInputs {
    double previous_potential = 0.0;   // [0,1]
    double cohort_max_potential = 0.0; // > 0
    double cumulative_income = 0.0;    // CI(v,r), >= 0
    double expense = 0.0;              // C_v, > 0
    long round = 2;                    // r, >= 2
    double omega = 0.5;                // [0,1]
};

// (1-omega) * potential share + omega * min(1, CI/(C_v*(r-1))). The income
// ratio is clamped at 1 so the score stays in [0,1].
double satisfaction(const SatisfactionInputs& in);

// balance += sum(budget - paid) over completed tasks. Throws std::domain_error
// if any task was overspent.
void replenish_contingency(ContingencyLedger& ledger, int round,
                           std::span<const std::pair<double, double>> completed);

} // namespace wcb
