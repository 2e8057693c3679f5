// NEON kernel variants for aarch64, where 128-bit SIMD is baseline.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "evgrid/kernels.hpp"

namespace evgrid::kernels {
namespace {

void clip_shift_neon(double* out, const double* prev, const double* ctrl,
                     const double* lo, const double* hi, double shift,
                     std::size_t n) {
    const float64x2_t vshift = vdupq_n_f64(shift);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v =
            vaddq_f64(vsubq_f64(vld1q_f64(prev + i), vld1q_f64(ctrl + i)), vshift);
        v = vmaxq_f64(v, vld1q_f64(lo + i));
        v = vminq_f64(v, vld1q_f64(hi + i));
        vst1q_f64(out + i, v);
    }
    for (; i < n; ++i) {
        double v = prev[i] - ctrl[i] + shift;
        out[i] = std::min(std::max(v, lo[i]), hi[i]);
    }
}

double sum_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_sq_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(x + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

void accumulate_neon(double* acc, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
    for (; i < n; ++i) acc[i] += x[i];
}

double sq_diff_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vmaxq_f64(acc, d);
    }
    double m = vmaxvq_f64(acc);
    for (; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double max_val_neon(const double* x, std::size_t n) {
    double m = -HUGE_VAL;
    std::size_t i = 0;
    if (n >= 2) {
        float64x2_t acc = vld1q_f64(x);
        for (i = 2; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(x + i));
        m = vmaxvq_f64(acc);
    }
    for (; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void scale_neon(double* out, const double* x, double k, std::size_t n) {
    const float64x2_t vk = vdupq_n_f64(k);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vk, vld1q_f64(x + i)));
    for (; i < n; ++i) out[i] = k * x[i];
}

}  // namespace

const KernelSet& neon() {
    static const KernelSet set{
        clip_shift_neon, sum_neon,          dot_neon,     sum_sq_neon,
        accumulate_neon, sq_diff_neon,      max_abs_diff_neon, max_val_neon,
        scale_neon,      "neon",
    };
    return set;
}

}  // namespace evgrid::kernels

#endif  // aarch64
