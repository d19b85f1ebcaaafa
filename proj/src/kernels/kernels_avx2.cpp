// AVX2 backend. exp/log follow the classic Cephes rational approximations
// (~1-2 ulp over the ranges we use); the equivalence and ulp suites in
// tests/test_kernels.cpp pin the agreement with the scalar backend.

#include "kernels_internal.hpp"

#if defined(__AVX2__) && (defined(__x86_64__) || defined(_M_X64))

#include "wcb/potential.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cstdint>

namespace wcb::kernels {

namespace {

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

// int64 lanes (|v| < 2^51) -> double lanes.
inline __m256d int64_to_pd(__m256i v) {
    const __m256i magic = _mm256_set1_epi64x(0x4338000000000000LL); // 2^52 + 2^51
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(v, magic)),
                         splat(6755399441055744.0));
}

// exp(x) for x in [-708, 708]; inputs are clamped to that window.
inline __m256d exp_pd(__m256d x) {
    x = _mm256_min_pd(x, splat(708.0));
    x = _mm256_max_pd(x, splat(-708.0));

    const __m256d n =
        _mm256_round_pd(_mm256_mul_pd(x, splat(1.4426950408889634073599)),
                        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    // r = x - n*ln2, with ln2 split for extra precision.
    __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(n, splat(6.93145751953125e-1)));
    r = _mm256_sub_pd(r, _mm256_mul_pd(n, splat(1.42860682030941723212e-6)));

    const __m256d r2 = _mm256_mul_pd(r, r);
    __m256d p = splat(1.26177193074810590878e-4);
    p = _mm256_add_pd(_mm256_mul_pd(p, r2), splat(3.02994407707441961300e-2));
    p = _mm256_add_pd(_mm256_mul_pd(p, r2), splat(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);
    __m256d q = splat(3.00198505138664455042e-6);
    q = _mm256_add_pd(_mm256_mul_pd(q, r2), splat(2.52448340349684104192e-3));
    q = _mm256_add_pd(_mm256_mul_pd(q, r2), splat(2.27265548208155028766e-1));
    q = _mm256_add_pd(_mm256_mul_pd(q, r2), splat(2.00000000000000000005e0));
    const __m256d e = _mm256_add_pd(
        splat(1.0),
        _mm256_mul_pd(splat(2.0), _mm256_div_pd(p, _mm256_sub_pd(q, p))));

    // Scale by 2^n via exponent bits.
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(e, _mm256_castsi256_pd(n64));
}

// log(x) for normal positive x (the aging constant domain):
// 2*atanh((m-1)/(m+1)) + e*ln2 with the mantissa normalized into
// [sqrt(1/2), sqrt(2)). The odd series in t converges past double precision
// by t^21 on that range (t^2 <= 0.0295).
inline __m256d log_pd(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    __m256i exponent =
        _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
    // mantissa into [1,2)
    const __m256d mant_mask =
        _mm256_castsi256_pd(_mm256_set1_epi64x(0x000fffffffffffffLL));
    __m256d m = _mm256_or_pd(_mm256_and_pd(x, mant_mask), splat(1.0));

    // normalize to [sqrt(1/2), sqrt(2)): if m >= sqrt2, halve and bump e.
    const __m256d ge = _mm256_cmp_pd(m, splat(1.4142135623730950488), _CMP_GE_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, splat(0.5)), ge);
    // mask lanes are all-ones == -1 as int64; subtracting adds 1.
    exponent = _mm256_sub_epi64(exponent, _mm256_castpd_si256(ge));
    const __m256d e = int64_to_pd(exponent);

    const __m256d t =
        _mm256_div_pd(_mm256_sub_pd(m, splat(1.0)), _mm256_add_pd(m, splat(1.0)));
    const __m256d t2 = _mm256_mul_pd(t, t);

    __m256d inner = splat(1.0 / 21.0);
    for (double c : {1.0 / 19.0, 1.0 / 17.0, 1.0 / 15.0, 1.0 / 13.0, 1.0 / 11.0,
                     1.0 / 9.0, 1.0 / 7.0, 1.0 / 5.0, 1.0 / 3.0})
        inner = _mm256_add_pd(_mm256_mul_pd(inner, t2), splat(c));

    const __m256d lead = _mm256_mul_pd(splat(2.0), t);
    __m256d corr = _mm256_mul_pd(_mm256_mul_pd(lead, t2), inner);
    // ln2 split: the high part times e is exact, the low part folds into the
    // small correction first.
    corr = _mm256_add_pd(corr, _mm256_mul_pd(e, splat(-2.121944400546905827679e-4)));
    return _mm256_add_pd(_mm256_add_pd(lead, corr),
                         _mm256_mul_pd(e, splat(0.693359375)));
}

inline __m256d sigmoid_pd(__m256d x) {
    const __m256d ex = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), x));
    return _mm256_div_pd(splat(1.0), _mm256_add_pd(splat(1.0), ex));
}

void potential_refresh_avx2(const PotentialBatch& b, double* out) {
    const __m256d one = splat(1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= b.n; i += 4) {
        const __m256d succ = _mm256_loadu_pd(b.successes + i);
        const __m256d par = _mm256_loadu_pd(b.participations + i);
        const __m256d pos = _mm256_cmp_pd(par, zero, _CMP_GT_OQ);
        const __m256d safe_par = _mm256_blendv_pd(one, par, pos);
        const __m256d ratio =
            _mm256_blendv_pd(zero, _mm256_div_pd(succ, safe_par), pos);

        const __m256d alpha = _mm256_loadu_pd(b.aging_alpha + i);
        const __m256d l = _mm256_loadu_pd(b.rounds_since + i);
        const __m256d psi = exp_pd(_mm256_div_pd(log_pd(alpha), l));

        const __m256d sig =
            _mm256_add_pd(_mm256_add_pd(ratio, _mm256_loadu_pd(b.skill_ratio + i)), psi);
        const __m256d init = sigmoid_pd(sig);

        const __m256d prev = _mm256_loadu_pd(b.previous + i);
        __m256d upd =
            _mm256_add_pd(_mm256_mul_pd(_mm256_sub_pd(one, prev), init), prev);
        upd = _mm256_min_pd(upd, one);
        _mm256_storeu_pd(out + i, upd);
    }
    for (; i < b.n; ++i) {
        const double success =
            detail::success_ratio_core(b.successes[i], b.participations[i]);
        const double psi = detail::aging_core(b.aging_alpha[i], b.rounds_since[i]);
        const double init = detail::sigmoid_core(success + b.skill_ratio[i] + psi);
        out[i] = detail::potential_update_core(b.previous[i], init);
    }
}

void scale_avx2(const double* x, std::size_t n, double c, double* out) {
    const __m256d cv = splat(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(cv, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = c * x[i];
}

void satisfaction_avx2(const SatisfactionBatch& b, double* out) {
    const __m256d one = splat(1.0);
    const __m256d omega = splat(b.omega);
    const __m256d om1 = splat(1.0 - b.omega);
    const __m256d rounds = splat(b.paid_rounds);
    std::size_t i = 0;
    for (; i + 4 <= b.n; i += 4) {
        const __m256d income = _mm256_loadu_pd(b.income + i);
        const __m256d denom = _mm256_mul_pd(_mm256_loadu_pd(b.expense + i), rounds);
        const __m256d ratio = _mm256_min_pd(one, _mm256_div_pd(income, denom));
        const __m256d share = _mm256_loadu_pd(b.share + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(om1, share),
                                                _mm256_mul_pd(omega, ratio)));
    }
    for (; i < b.n; ++i) {
        const double ratio = std::min(1.0, b.income[i] / (b.expense[i] * b.paid_rounds));
        out[i] = (1.0 - b.omega) * b.share[i] + b.omega * ratio;
    }
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
    for (; i < n; ++i) s += x[i];
    return s;
}

double max_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void exp_batch_avx2(const double* x, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) {
        alignas(32) double lane[4] = {x[i], 0, 0, 0};
        alignas(32) double res[4];
        _mm256_store_pd(res, exp_pd(_mm256_load_pd(lane)));
        out[i] = res[0];
    }
}

void log_batch_avx2(const double* x, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log_pd(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) {
        alignas(32) double lane[4] = {x[i], 1, 1, 1};
        alignas(32) double res[4];
        _mm256_store_pd(res, log_pd(_mm256_load_pd(lane)));
        out[i] = res[0];
    }
}

} // namespace

const Ops* avx2_table() {
    static const Ops ops{"avx2", potential_refresh_avx2, scale_avx2,
                         satisfaction_avx2, sum_avx2, max_avx2};
    return &ops;
}

const Avx2Math* avx2_math() {
    static const Avx2Math m{exp_batch_avx2, log_batch_avx2};
    return &m;
}

} // namespace wcb::kernels

#else // !__AVX2__

namespace wcb::kernels {
const Ops* avx2_table() { return nullptr; }
const Avx2Math* avx2_math() { return nullptr; }
} // namespace wcb::kernels

#endif
