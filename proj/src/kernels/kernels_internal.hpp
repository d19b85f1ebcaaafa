#pragma once
// Internal wiring between the dispatch TU and the ISA-specific TUs.

#include "wcb/kernels.hpp"

namespace wcb::kernels {

// Defined in kernels_avx2.cpp (compiled with -mavx2). Callers must verify CPU
// support before invoking any function in the table.
const Ops* avx2_table();

// Raw transcendental batches, exported for the accuracy suite.
struct Avx2Math {
    void (*exp_batch)(const double* x, std::size_t n, double* out);
    void (*log_batch)(const double* x, std::size_t n, double* out);
};
const Avx2Math* avx2_math(); // nullptr when AVX2 is not compiled in

} // namespace wcb::kernels
