#pragma once
// Slot-vector arithmetic kernels. Scalar reference implementations plus
// SIMD variants selected once at startup from CPU capabilities. The scalar
// set is always available and is the ground truth for equivalence tests.

#include <cstddef>

namespace evgrid::kernels {

struct KernelSet {
    // out[i] = clamp(prev[i] - ctrl[i] + shift, lo[i], hi[i])
    void (*clip_shift)(double* out, const double* prev, const double* ctrl,
                       const double* lo, const double* hi, double shift,
                       std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    // acc[i] += x[i]
    void (*accumulate)(double* acc, const double* x, std::size_t n);
    // sum of (a[i]-b[i])^2
    double (*sq_diff)(const double* a, const double* b, std::size_t n);
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    double (*max_val)(const double* x, std::size_t n);
    void (*scale)(double* out, const double* x, double k, std::size_t n);
    const char* name;
};

const KernelSet& scalar();

// Best set for the running CPU (AVX2 on capable x86-64, NEON on aarch64,
// scalar otherwise). Stable for the lifetime of the process.
const KernelSet& active();

#if defined(__x86_64__) || defined(_M_X64)
const KernelSet& avx2();
bool avx2_supported();
#endif
#if defined(__aarch64__)
const KernelSet& neon();
#endif

}  // namespace evgrid::kernels
