#include "evgrid/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace evgrid::kernels {
namespace {

void clip_shift_scalar(double* out, const double* prev, const double* ctrl,
                       const double* lo, const double* hi, double shift,
                       std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = prev[i] - ctrl[i] + shift;
        out[i] = std::min(std::max(v, lo[i]), hi[i]);
    }
}

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_sq_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

void accumulate_scalar(double* acc, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

double sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double max_val_scalar(const double* x, std::size_t n) {
    double m = -HUGE_VAL;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void scale_scalar(double* out, const double* x, double k, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = k * x[i];
}

}  // namespace

const KernelSet& scalar() {
    static const KernelSet set{
        clip_shift_scalar, sum_scalar,     dot_scalar,
        sum_sq_scalar,     accumulate_scalar, sq_diff_scalar,
        max_abs_diff_scalar, max_val_scalar, scale_scalar,
        "scalar",
    };
    return set;
}

const KernelSet& active() {
#if defined(__x86_64__) || defined(_M_X64)
    static const KernelSet& chosen = avx2_supported() ? avx2() : scalar();
#elif defined(__aarch64__)
    static const KernelSet& chosen = neon();
#else
    static const KernelSet& chosen = scalar();
#endif
    return chosen;
}

}  // namespace evgrid::kernels
