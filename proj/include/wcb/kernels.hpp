#pragma once
// Batch kernels for the per-volunteer arithmetic that dominates large rounds:
// the potential refresh, dividend-share scaling, satisfaction scoring and the
// reductions they need. One scalar reference backend plus an AVX2 variant,
// selected at runtime; both must agree to tight tolerance (equivalence suite
// in tests/).

#include <cstddef>
#include <string_view>

namespace wcb::kernels {

// Structure-of-arrays input for the fused potential refresh:
//   out[i] = min(1, (1 - prev[i]) * sigmoid(succ[i]/par[i] + skill_ratio[i]
//                 + alpha[i]^(1/l[i])) + prev[i])
// with succ/par read as 0 when par[i] == 0. All spans have length n.
struct PotentialBatch {
    std::size_t n = 0;
    const double* successes = nullptr;
    const double* participations = nullptr;
    const double* skill_ratio = nullptr;     // |S_v|/|S|, precomputed
    const double* aging_alpha = nullptr;     // (0,1]
    const double* rounds_since = nullptr;    // l_v >= 1
    const double* previous = nullptr;        // [0,1]
};

// Satisfaction scoring over a frozen cohort snapshot:
//   out[i] = (1-omega) * share[i] + omega * min(1, income[i]/(expense[i]*rounds))
// where share[i] is the volunteer's potential normalized by the cohort max.
struct SatisfactionBatch {
    std::size_t n = 0;
    const double* share = nullptr;
    const double* income = nullptr;
    const double* expense = nullptr;         // > 0
    double paid_rounds = 1.0;                // r - 1, >= 1
    double omega = 0.5;
};

struct Ops {
    const char* name;
    void (*potential_refresh)(const PotentialBatch&, double* out);
    void (*scale)(const double* x, std::size_t n, double c, double* out); // out = c*x
    void (*satisfaction)(const SatisfactionBatch&, double* out);
    double (*sum)(const double* x, std::size_t n);
    double (*max)(const double* x, std::size_t n);                        // 0 when n == 0
};

const Ops& scalar_ops();
// nullptr when AVX2 is unavailable (at build or on this CPU).
const Ops* avx2_ops();

// Backend in use; defaults to the best available, overridable via
// set_backend() or the WCB_KERNEL environment variable ("auto", "scalar",
// "avx2"). Returns false if the requested backend cannot be honored.
const Ops& active_ops();
bool set_backend(std::string_view name);

} // namespace wcb::kernels
