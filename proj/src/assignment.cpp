#include "wcb/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace wcb {

namespace {
constexpr double kMoneyTol = 1e-9;

double cost_ratio(double expense, double budget) {
    if (budget > 0.0) return expense / budget;
    // Zero-budget tasks can only afford free volunteers; make paid candidates
    // sort last while keeping the ordering total and finite.
    return expense > 0.0 ? 1e18 : 0.0;
}
} // namespace

void validate_weights(const UtilityWeights& w) {
    if (w.w_skill < 0.0 || w.w_willingness < 0.0 || w.w_cost < 0.0)
        throw std::invalid_argument("utility weights must be non-negative");
    const double sum = w.w_skill + w.w_willingness + w.w_cost;
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("utility weights must sum to 1, got " + std::to_string(sum));
}

const char* to_string(PayKind kind) {
    switch (kind) {
        case PayKind::cost_coverage: return "cost_coverage";
        case PayKind::fixed: return "fixed";
        case PayKind::training: return "training";
        case PayKind::increasing: return "increasing";
    }
    return "?";
}

double remuneration(const RemunerationPolicy& policy, const Volunteer& v, int round) {
    if (round < 1) throw std::invalid_argument("remuneration: round must be >= 1");
    switch (policy.kind) {
        case PayKind::cost_coverage:
        case PayKind::fixed:
            return v.expense;
        case PayKind::training:
            return std::max(0.0, policy.base - policy.slope * double(round - 1));
        case PayKind::increasing:
            return policy.base + policy.slope * double(round - 1);
    }
    return 0.0;
}

double candidate_utility(const Volunteer& v, const Task& t, const SkillMask& covered,
                         const UtilityWeights& weights) {
    SkillMask needed = t.skills;
    for (std::size_t i = 0; i < needed.words.size() && i < covered.words.size(); ++i)
        needed.words[i] &= ~covered.words[i];
    const std::size_t marginal = intersect_count(v.skills, needed);
    if (marginal == 0)
        throw std::invalid_argument("candidate_utility: '" + v.id +
                                    "' adds no uncovered skill for task '" + t.id + "'");
    const double skill_term = double(marginal) / double(popcount(t.skills));
    return weights.w_skill * skill_term + weights.w_willingness * v.willingness -
           weights.w_cost * cost_ratio(v.expense, t.budget);
}

namespace {

struct HeapEntry {
    double utility;
    int rank;        // position in id-sorted candidate order; lower wins ties
    int idx;         // index into the available span
    std::uint32_t version; // coverage version the utility was computed against
};

struct HeapLess {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.utility != b.utility) return a.utility < b.utility;
        return a.rank > b.rank;
    }
};

double utility_raw(const Volunteer& v, const Task& t, std::size_t marginal,
                   std::size_t required_count, const UtilityWeights& w) {
    return w.w_skill * (double(marginal) / double(required_count)) +
           w.w_willingness * v.willingness - w.w_cost * cost_ratio(v.expense, t.budget);
}

} // namespace

AllocationMap assign_round(std::span<const Task* const> open_tasks,
                           std::span<const Volunteer* const> available,
                           const UtilityWeights& weights,
                           const RemunerationPolicy& policy, int round) {
    validate_weights(weights);
    if (round < 1) throw std::invalid_argument("assign_round: round must be >= 1");
    for (const Task* t : open_tasks)
        if (!t->skills.resolved())
            throw std::invalid_argument("assign_round: task '" + t->id + "' has no skill mask");
    for (const Volunteer* v : available)
        if (!v->skills.resolved())
            throw std::invalid_argument("assign_round: volunteer '" + v->id +
                                        "' has no skill mask");

    // Deterministic processing orders.
    std::vector<const Task*> tasks(open_tasks.begin(), open_tasks.end());
    std::sort(tasks.begin(), tasks.end(), [](const Task* a, const Task* b) {
        if (a->arrival_time != b->arrival_time) return a->arrival_time < b->arrival_time;
        return a->id < b->id;
    });
    std::vector<int> order(available.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return available[std::size_t(a)]->id < available[std::size_t(b)]->id;
    });
    std::vector<int> rank_of(available.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank_of[std::size_t(order[r])] = int(r);

    AllocationMap map(round);
    std::vector<char> taken(available.size(), 0);

    for (const Task* task : tasks) {
        const std::size_t required_count = popcount(task->skills);
        if (required_count == 0) continue; // validated worlds never hit this

        SkillMask covered;
        covered.words.assign(task->skills.words.size(), 0);
        double residual = task->budget;
        std::uint32_t version = 0;

        // Seed the heap with every free volunteer that contributes at least
        // one required skill.
        std::vector<HeapEntry> seed;
        for (std::size_t i = 0; i < available.size(); ++i) {
            if (taken[i]) continue;
            const std::size_t marginal = intersect_count(available[i]->skills, task->skills);
            if (marginal == 0) continue;
            seed.push_back(HeapEntry{
                utility_raw(*available[i], *task, marginal, required_count, weights),
                rank_of[i], int(i), 0});
        }
        std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap(
            HeapLess{}, std::move(seed));

        struct Pick {
            int idx;
            double pay;
        };
        std::vector<Pick> picks;

        while (!covered.contains_all(task->skills) && !heap.empty()) {
            HeapEntry top = heap.top();
            heap.pop();
            const Volunteer& v = *available[std::size_t(top.idx)];

            // Marginal coverage can only shrink as picks accumulate, so stale
            // utilities are upper bounds: re-score and reinsert.
            if (top.version != version) {
                SkillMask needed = task->skills;
                for (std::size_t w = 0; w < needed.words.size(); ++w)
                    needed.words[w] &= ~covered.words[w];
                const std::size_t marginal = intersect_count(v.skills, needed);
                if (marginal == 0) continue; // nothing left to add; drop for good
                top.utility = utility_raw(v, *task, marginal, required_count, weights);
                top.version = version;
                heap.push(top);
                continue;
            }

            const double pay = remuneration(policy, v, round);
            if (pay > residual + kMoneyTol) continue; // budget can only shrink
            covered |= v.skills;
            residual -= pay;
            picks.push_back(Pick{top.idx, pay});
            ++version;
        }

        if (covered.contains_all(task->skills)) {
            for (const Pick& p : picks) {
                map.add(task->id, available[std::size_t(p.idx)]->id, p.pay);
                taken[std::size_t(p.idx)] = 1;
            }
        }
        // else: picks are released implicitly (taken[] was never marked).
    }
    return map;
}

AllocationMap assign_round(std::span<const Task> open_tasks,
                           std::span<const Volunteer> available,
                           const UtilityWeights& weights,
                           const RemunerationPolicy& policy, int round) {
    std::vector<const Task*> ts;
    ts.reserve(open_tasks.size());
    for (const auto& t : open_tasks) ts.push_back(&t);
    std::vector<const Volunteer*> vs;
    vs.reserve(available.size());
    for (const auto& v : available) vs.push_back(&v);
    return assign_round(std::span<const Task* const>(ts),
                        std::span<const Volunteer* const>(vs), weights, policy, round);
}

} // namespace wcb
