#pragma once

#include <complex>
#include <cstddef>

namespace mlspeed::kernels {

// Data-parallel inner loops with scalar reference implementations and
// SIMD variants selected once at startup from CPU capabilities.
struct Ops {
    const char* name;

    // sum_i |a[i] - b[i]|
    double (*sum_abs_diff)(const double* a, const double* b, size_t n);

    // out[i] = a[i] - b[i]
    void (*subtract)(const double* a, const double* b, double* out, size_t n);

    // out[i] = a[i] * conj(b[i])
    void (*mul_conj)(const std::complex<double>* a, const std::complex<double>* b,
                     std::complex<double>* out, size_t n);

    // out[i] = (a[i] - b[i]) * conj(c[i])   (fused background-subtract + match)
    void (*sub_mul_conj)(const std::complex<double>* a, const std::complex<double>* b,
                         const std::complex<double>* c, std::complex<double>* out, size_t n);
};

const Ops& scalar_ops();
bool cpu_has_avx2();

// Active implementation; resolves to the best available on first use.
const Ops& active();

// Test/benchmark hook: force the scalar path. Returns the previous setting.
bool force_scalar(bool on);

}  // namespace mlspeed::kernels
