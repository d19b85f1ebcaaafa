// Scalar reference backend. These loops are the definition the SIMD variants
// are tested against, so they stay deliberately plain.

#include "wcb/kernels.hpp"
#include "wcb/potential.hpp"

#include <algorithm>

namespace wcb::kernels {

namespace {

void potential_refresh_scalar(const PotentialBatch& b, double* out) {
    for (std::size_t i = 0; i < b.n; ++i) {
        const double success =
            detail::success_ratio_core(b.successes[i], b.participations[i]);
        const double psi = detail::aging_core(b.aging_alpha[i], b.rounds_since[i]);
        const double sig = success + b.skill_ratio[i] + psi;
        const double init = detail::sigmoid_core(sig);
        out[i] = detail::potential_update_core(b.previous[i], init);
    }
}

void scale_scalar(const double* x, std::size_t n, double c, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c * x[i];
}

void satisfaction_scalar(const SatisfactionBatch& b, double* out) {
    for (std::size_t i = 0; i < b.n; ++i) {
        const double income_ratio =
            std::min(1.0, b.income[i] / (b.expense[i] * b.paid_rounds));
        out[i] = (1.0 - b.omega) * b.share[i] + b.omega * income_ratio;
    }
}

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double max_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", potential_refresh_scalar, scale_scalar,
                         satisfaction_scalar, sum_scalar, max_scalar};
    return ops;
}

} // namespace wcb::kernels
