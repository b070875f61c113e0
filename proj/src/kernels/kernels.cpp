#include "qclust/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qclust::kernels {

namespace scalar {

void apply_real_2x2(std::complex<double>* a0, std::complex<double>* a1,
                    std::size_t n, double m00, double m01, double m10, double m11) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> x = a0[i];
        const std::complex<double> y = a1[i];
        a0[i] = m00 * x + m01 * y;
        a1[i] = m10 * x + m11 * y;
    }
}

double norm_sq(const std::complex<double>* a, std::size_t n) {
    // |z|^2 sums reduce to sums of squares over the interleaved doubles.
    const double* d = reinterpret_cast<const double*>(a);
    double acc = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) acc += d[i] * d[i];
    return acc;
}

std::complex<double> cdot(const std::complex<double>* a,
                          const std::complex<double>* b, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void rotate_pair(double* x, double* y, std::size_t n, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

}  // namespace scalar

namespace {

Isa resolve_isa() {
#if defined(QCLUST_HAVE_AVX2)
    const bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    const bool cpu_ok = false;
#endif
    if (const char* env = std::getenv("QCLUST_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0) return cpu_ok ? Isa::avx2 : Isa::scalar;
    }
    return cpu_ok ? Isa::avx2 : Isa::scalar;
}

}  // namespace

Isa active_isa() {
    static const Isa isa = resolve_isa();
    return isa;
}

const char* isa_name(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

#if defined(QCLUST_HAVE_AVX2)
#define QCLUST_DISPATCH(fn, ...) \
    (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define QCLUST_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void apply_real_2x2(std::complex<double>* a0, std::complex<double>* a1,
                    std::size_t n, double m00, double m01, double m10, double m11) {
    QCLUST_DISPATCH(apply_real_2x2, a0, a1, n, m00, m01, m10, m11);
}

double norm_sq(const std::complex<double>* a, std::size_t n) {
    return QCLUST_DISPATCH(norm_sq, a, n);
}

std::complex<double> cdot(const std::complex<double>* a,
                          const std::complex<double>* b, std::size_t n) {
    return QCLUST_DISPATCH(cdot, a, b, n);
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    return QCLUST_DISPATCH(sq_dist, a, b, n);
}

void rotate_pair(double* x, double* y, std::size_t n, double c, double s) {
    QCLUST_DISPATCH(rotate_pair, x, y, n, c, s);
}

}  // namespace qclust::kernels
