#include "wcb/vrave.hpp"

#include "wcb/incentive.hpp"
#include "wcb/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace wcb {

std::vector<std::string> unassigned_set(const AllocationMap& map,
                                        std::span<const CohortMember> cohort) {
    std::set<std::string> active_ids;
    for (const auto& m : cohort) active_ids.insert(m.ledger->volunteer_id);
    for (const auto& id : map.assigned_volunteers())
        if (active_ids.count(id) == 0)
            throw std::invalid_argument("allocation map references unknown volunteer '" + id +
                                        "'");
    std::vector<std::string> out;
    out.reserve(cohort.size());
    for (const auto& id : active_ids)
        if (!map.has_volunteer(id)) out.push_back(id);
    return out;
}

RetentionOutcome run_vrave(const ContingencyLedger& fund, int round,
                           const AllocationMap& map,
                           std::span<const CohortMember> cohort, double threshold,
                           const RetentionConfig& cfg) {
    if (round < 1) throw std::invalid_argument("run_vrave: round must be >= 1");
    if (!(threshold >= 0.0) || threshold > 1.0)
        throw std::invalid_argument("run_vrave: threshold must lie in [0,1]");

    RetentionOutcome out;
    std::vector<std::string> unassigned = unassigned_set(map, cohort);

    std::map<std::string, const CohortMember*> by_id;
    for (const auto& m : cohort) by_id.emplace(m.ledger->volunteer_id, &m);

    const auto& k = kernels::active_ops();

    // Cohort-wide max of prior potentials (assigned volunteers included).
    std::vector<double> prev_all;
    prev_all.reserve(cohort.size());
    for (const auto& m : cohort) prev_all.push_back(m.ledger->previous_potential);
    const double cohort_max = k.max(prev_all.data(), prev_all.size());

    // Satisfaction is undefined in round 1 and whenever no prior potential
    // exists yet; the pass degenerates to retain-all.
    if (round < 2 || !(cohort_max > 0.0)) {
        for (auto& id : unassigned) out.retained.insert(std::move(id));
        return out;
    }
    out.evaluated = true;
    if (unassigned.empty()) return out;

    const std::size_t n = unassigned.size();
    std::vector<const CohortMember*> members(n);
    std::vector<double> prev(n);
    for (std::size_t i = 0; i < n; ++i) {
        members[i] = by_id.at(unassigned[i]);
        prev[i] = members[i]->ledger->previous_potential;
        if (!(members[i]->volunteer->expense > 0.0))
            throw std::domain_error("run_vrave: volunteer '" + unassigned[i] +
                                    "' has non-positive expense");
    }

    std::vector<double> share(n);
    k.scale(prev.data(), n, 1.0 / cohort_max, share.data());
    const double share_sum = k.sum(share.data(), n);

    // Dividends: everyone in the unassigned set stays in the denominator; the
    // eligibility gate only decides who is actually paid.
    std::vector<double> paid(n, 0.0);
    if (cfg.pay_dividends && share_sum > 0.0) {
        const double scale = cfg.gamma * fund.balance() / share_sum;
        k.scale(share.data(), n, scale, paid.data());
        for (std::size_t i = 0; i < n; ++i) {
            if (cfg.eligibility.kind == DividendEligibility::Kind::min_consecutive) {
                const long streak = members[i]->ledger->consecutive_unassigned + 1;
                if (streak < cfg.eligibility.min_rounds) paid[i] = 0.0;
            }
            if (paid[i] > 0.0)
                update_cumulative_income(*members[i]->ledger, 0.0, paid[i]);
        }
    }

    std::vector<double> income(n), expense(n), sat(n);
    for (std::size_t i = 0; i < n; ++i) {
        income[i] = members[i]->ledger->cumulative_income;
        expense[i] = members[i]->volunteer->expense;
    }
    kernels::SatisfactionBatch sb;
    sb.n = n;
    sb.share = share.data();
    sb.income = income.data();
    sb.expense = expense.data();
    sb.paid_rounds = double(round - 1);
    sb.omega = cfg.omega;
    k.satisfaction(sb, sat.data());

    double div_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        div_total += paid[i];
        const bool keep = !(sat[i] < threshold); // strict drop rule
        out.per_volunteer.emplace(unassigned[i],
                                  RetentionDecision{paid[i], sat[i], keep});
        if (keep)
            out.retained.insert(unassigned[i]);
        else
            out.dropped.insert(unassigned[i]);
    }
    out.total_dividend = div_total;
    return out;
}

} // namespace wcb
