#pragma once
// Potential level machinery: the aging factor, the sigma aggregate, the
// sigmoid initialization and the blend update. The detail:: cores are the
// unvalidated arithmetic shared with the batch kernels; the public functions
// add domain checking.

#include <algorithm>
#include <cmath>

namespace wcb {

namespace detail {

inline double success_ratio_core(double successes, double participations) {
    // 0/0 for a volunteer that never participated; defined as 0.
    return participations > 0.0 ? successes / participations : 0.0;
}

inline double aging_core(double alpha, double rounds_since) {
    return std::pow(alpha, 1.0 / rounds_since);
}

inline double sigmoid_core(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double potential_update_core(double previous, double init) {
    // (1 - prev) * init + prev; clamped so rounding can never push it past 1.
    return std::min(1.0, (1.0 - previous) * init + previous);
}

} // namespace detail

struct PotentialInputs {
    long alloc_success = 0;
    long alloc_participated = 0;
    long skill_count = 0;            // |S_v| within the catalog
    long catalog_size = 0;           // |S|, > 0
    double aging_constant = 0.1;     // alpha, (0,1]
    long rounds_since_assignment = 1; // l_v, >= 1
    double previous_potential = 0.0; // [0,1]
};

// alpha^(1/l). Strictly non-decreasing in l for alpha < 1; -> 1 as l -> inf.
double aging_factor(double alpha, long rounds_since_assignment);

// success ratio + skill ratio + aging factor; range [0,3].
double sigma(const PotentialInputs& inputs);

// Sigmoid initialization of the potential level; input restricted to the
// sigma range [0,3], so outputs land in [0.5, ~0.9526].
double potential_init(double sigma_value);

// One-round blend: (1 - previous) * init + previous. Non-decreasing in
// `previous`; newcomers pass previous = 0.
double potential_update(double previous, double init);

} // namespace wcb
