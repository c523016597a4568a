#include "mlspeed/simd.hpp"

#include <cmath>

namespace mlspeed::kernels {
namespace {

double sum_abs_diff_scalar(const double* a, const double* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i)
        acc += std::abs(a[i] - b[i]);
    return acc;
}

void subtract_scalar(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i)
        out[i] = a[i] - b[i];
}

void mul_conj_scalar(const std::complex<double>* a, const std::complex<double>* b,
                     std::complex<double>* out, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        out[i] = {ar * br + ai * bi, ai * br - ar * bi};
    }
}

void sub_mul_conj_scalar(const std::complex<double>* a, const std::complex<double>* b,
                         const std::complex<double>* c, std::complex<double>* out, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        const double dr = a[i].real() - b[i].real();
        const double di = a[i].imag() - b[i].imag();
        const double cr = c[i].real(), ci = c[i].imag();
        out[i] = {dr * cr + di * ci, di * cr - dr * ci};
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", sum_abs_diff_scalar, subtract_scalar,
                         mul_conj_scalar, sub_mul_conj_scalar};
    return ops;
}

}  // namespace mlspeed::kernels
