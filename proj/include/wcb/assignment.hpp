#pragma once
// Skill-oriented, budget-constrained greedy assignment plus the remuneration
// policies (cost coverage and the fixed/training/increasing baselines).

#include "wcb/domain.hpp"

#include <span>
#include <string>

namespace wcb {

// Candidate scoring weights; must be non-negative and sum to 1.
struct UtilityWeights {
    double w_skill = 1.0 / 3.0;
    double w_willingness = 1.0 / 3.0;
    double w_cost = 1.0 / 3.0;
};

void validate_weights(const UtilityWeights& w); // throws std::invalid_argument

enum class PayKind { cost_coverage, fixed, training, increasing };

struct RemunerationPolicy {
    PayKind kind = PayKind::cost_coverage;
    double base = 0.0;   // dollars, training/increasing anchor
    double slope = 0.0;  // dollars per round, >= 0
};

const char* to_string(PayKind kind);

// Payment offered to volunteer v in the given round (>= 1):
//   cost_coverage / fixed -> C_v
//   training              -> max(0, base - slope*(round-1))
//   increasing            -> base + slope*(round-1)
double remuneration(const RemunerationPolicy& policy, const Volunteer& v, int round);

// Marginal-coverage utility of a candidate against a task:
//   w_skill * |S_v ∩ (S_t \ covered)| / |S_t|
//   + w_willingness * willingness
//   - w_cost * C_v / B_t
// Throws std::invalid_argument when the candidate adds no uncovered skill
// (callers filter before scoring).
double candidate_utility(const Volunteer& v, const Task& t, const SkillMask& covered,
                         const UtilityWeights& weights);

// One batch round of greedy assignment. Tasks are processed in arrival order
// (ties by id); per task the highest-utility feasible candidate is taken until
// the required skills are covered or no candidate fits. Tasks that cannot be
// fully covered release their tentative picks and stay unassigned. Each
// volunteer serves at most one task. Utility ties break toward the
// lexicographically smaller volunteer id.
AllocationMap assign_round(std::span<const Task* const> open_tasks,
                           std::span<const Volunteer* const> available,
                           const UtilityWeights& weights,
                           const RemunerationPolicy& policy, int round);

// Value-based convenience overload.
AllocationMap assign_round(std::span<const Task> open_tasks,
                           std::span<const Volunteer> available,
                           const UtilityWeights& weights,
                           const RemunerationPolicy& policy, int round);

} // namespace wcb
