#include "wcb/incentive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wcb {

namespace {
constexpr double kMoneyTol = 1e-9;
} // namespace

double DividendContext::cohort_max() const {
    if (max_cache_ >= 0.0) return max_cache_;
    double m = 0.0;
    for (const auto& [id, p] : cohort_potentials) m = std::max(m, p);
    return max_cache_ = m;
}

double DividendContext::share_sum() const {
    if (sum_cache_ >= 0.0) return sum_cache_;
    const double m = cohort_max();
    if (!(m > 0.0)) return sum_cache_ = 0.0;
    double s = 0.0;
    for (const auto& id : recipient_set) {
        auto it = cohort_potentials.find(id);
        if (it == cohort_potentials.end())
            throw std::invalid_argument("recipient '" + id + "' missing from cohort potentials");
        s += it->second / m;
    }
    return sum_cache_ = s;
}

double dividend(const std::string& volunteer_id, const DividendContext& ctx) {
    if (ctx.recipient_set.count(volunteer_id) == 0)
        throw std::invalid_argument("dividend: '" + volunteer_id +
                                    "' is not in the recipient set");
    const double m = ctx.cohort_max();
    if (!(m > 0.0)) return 0.0;
    auto it = ctx.cohort_potentials.find(volunteer_id);
    if (it == ctx.cohort_potentials.end())
        throw std::invalid_argument("dividend: '" + volunteer_id +
                                    "' missing from cohort potentials");
    const double denom = ctx.share_sum();
    if (!(denom > 0.0)) return 0.0;
    const double share = it->second / m;
    return ctx.gamma * share * (ctx.contingency_balance / denom);
}

double total_dividend(const DividendContext& ctx) {
    double total = 0.0;
    for (const auto& id : ctx.recipient_set) total += dividend(id, ctx);
    return total;
}

void update_cumulative_income(VolunteerLedger& ledger, double remuneration_paid,
                              double dividend_paid) {
    if (remuneration_paid < 0.0)
        throw std::domain_error("update_cumulative_income: negative remuneration");
    if (dividend_paid < 0.0)
        throw std::domain_error("update_cumulative_income: negative dividend");
    ledger.cumulative_income += remuneration_paid + dividend_paid;
}

double satisfaction(const SatisfactionInputs& in) {
    if (in.round < 2)
        throw std::domain_error("satisfaction: undefined before round 2");
    if (!(in.expense > 0.0))
        throw std::domain_error("satisfaction: expense must be > 0");
    if (!(in.cohort_max_potential > 0.0))
        throw std::domain_error("satisfaction: cohort max potential must be > 0");
    if (!(in.omega >= 0.0) || in.omega > 1.0)
        throw std::domain_error("satisfaction: omega must lie in [0,1]");
    if (!(in.previous_potential >= 0.0) || in.previous_potential > in.cohort_max_potential + 1e-12)
        throw std::domain_error("satisfaction: potential outside [0, cohort max]");
    const double share = in.previous_potential / in.cohort_max_potential;
    const double income_ratio =
        std::min(1.0, in.cumulative_income / (in.expense * double(in.round - 1)));
    return (1.0 - in.omega) * share + in.omega * income_ratio;
}

void replenish_contingency(ContingencyLedger& ledger, int round,
                           std::span<const std::pair<double, double>> completed) {
    double inflow = 0.0;
    for (const auto& [budget, paid] : completed) {
        if (paid > budget + kMoneyTol)
            throw std::domain_error("replenish_contingency: task overspent (paid " +
                                    std::to_string(paid) + " of " + std::to_string(budget) + ")");
        inflow += std::max(0.0, budget - paid);
    }
    if (inflow > 0.0 || !completed.empty()) ledger.record_inflow(round, inflow);
}

} // namespace wcb
