// AVX2 variants of the arithmetic kernels. Compiled with -mavx2 -mfma;
// only reached after a runtime cpuid check in the dispatcher.

#include "mlspeed/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#include <cmath>

namespace mlspeed::kernels {
namespace {

double sum_abs_diff_avx2(const double* a, const double* b, size_t n) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i)
        total += std::abs(a[i] - b[i]);
    return total;
}

void subtract_avx2(const double* a, const double* b, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i,
                         _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] - b[i];
}

// A 256-bit vector holds two complex doubles as [re0 im0 re1 im1].
// x*conj(y): even lanes xr*yr + xi*yi, odd lanes xi*yr - xr*yi.
void mul_conj_avx2(const std::complex<double>* a, const std::complex<double>* b,
                   std::complex<double>* out, size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double* po = reinterpret_cast<double*>(out);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d x = _mm256_loadu_pd(pa + 2 * i);
        __m256d y = _mm256_loadu_pd(pb + 2 * i);
        __m256d yr = _mm256_movedup_pd(y);          // [yr0 yr0 yr1 yr1]
        __m256d yi = _mm256_permute_pd(y, 0xF);     // [yi0 yi0 yi1 yi1]
        __m256d x_swap = _mm256_permute_pd(x, 0x5); // [xi0 xr0 xi1 xr1]
        __m256d re = _mm256_fmadd_pd(x_swap, yi, _mm256_mul_pd(x, yr));
        __m256d im = _mm256_fmsub_pd(x, yr, _mm256_mul_pd(x_swap, yi));
        _mm256_storeu_pd(po + 2 * i, _mm256_blend_pd(re, im, 0xA));
    }
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        out[i] = {ar * br + ai * bi, ai * br - ar * bi};
    }
}

void sub_mul_conj_avx2(const std::complex<double>* a, const std::complex<double>* b,
                       const std::complex<double>* c, std::complex<double>* out, size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    const double* pc = reinterpret_cast<const double*>(c);
    double* po = reinterpret_cast<double*>(out);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d x = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
        __m256d y = _mm256_loadu_pd(pc + 2 * i);
        __m256d yr = _mm256_movedup_pd(y);
        __m256d yi = _mm256_permute_pd(y, 0xF);
        __m256d x_swap = _mm256_permute_pd(x, 0x5);
        __m256d re = _mm256_fmadd_pd(x_swap, yi, _mm256_mul_pd(x, yr));
        __m256d im = _mm256_fmsub_pd(x, yr, _mm256_mul_pd(x_swap, yi));
        _mm256_storeu_pd(po + 2 * i, _mm256_blend_pd(re, im, 0xA));
    }
    for (; i < n; ++i) {
        const double dr = a[i].real() - b[i].real();
        const double di = a[i].imag() - b[i].imag();
        const double cr = c[i].real(), ci = c[i].imag();
        out[i] = {dr * cr + di * ci, di * cr - dr * ci};
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{"avx2", sum_abs_diff_avx2, subtract_avx2,
                         mul_conj_avx2, sub_mul_conj_avx2};
    return ops;
}

}  // namespace mlspeed::kernels

#endif  // x86
