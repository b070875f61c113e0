// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma;
// callers must route through the runtime dispatch in kernels.cpp.

#include "qclust/kernels.hpp"

#if defined(QCLUST_HAVE_AVX2)

#include <immintrin.h>

namespace qclust::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void apply_real_2x2(std::complex<double>* a0, std::complex<double>* a1,
                    std::size_t n, double m00, double m01, double m10, double m11) {
    double* p0 = reinterpret_cast<double*>(a0);
    double* p1 = reinterpret_cast<double*>(a1);
    const std::size_t len = 2 * n;  // interleaved re/im doubles
    const __m256d v00 = _mm256_set1_pd(m00);
    const __m256d v01 = _mm256_set1_pd(m01);
    const __m256d v10 = _mm256_set1_pd(m10);
    const __m256d v11 = _mm256_set1_pd(m11);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        const __m256d x = _mm256_loadu_pd(p0 + i);
        const __m256d y = _mm256_loadu_pd(p1 + i);
        _mm256_storeu_pd(p0 + i, _mm256_fmadd_pd(v00, x, _mm256_mul_pd(v01, y)));
        _mm256_storeu_pd(p1 + i, _mm256_fmadd_pd(v10, x, _mm256_mul_pd(v11, y)));
    }
    for (; i < len; ++i) {
        const double x = p0[i];
        const double y = p1[i];
        p0[i] = m00 * x + m01 * y;
        p1[i] = m10 * x + m11 * y;
    }
}

double norm_sq(const std::complex<double>* a, std::size_t n) {
    const double* d = reinterpret_cast<const double*>(a);
    const std::size_t len = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        const __m256d v = _mm256_loadu_pd(d + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double out = hsum(acc);
    for (; i < len; ++i) out += d[i] * d[i];
    return out;
}

std::complex<double> cdot(const std::complex<double>* a,
                          const std::complex<double>* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    // Two complex values per 256-bit lane: [re0 im0 re1 im1].
    const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    __m256d re_acc = _mm256_setzero_pd();
    __m256d im_acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        re_acc = _mm256_fmadd_pd(va, vb, re_acc);
        // conj(a)*b imaginary part: re(a)*im(b) - im(a)*re(b)
        const __m256d vb_sw = _mm256_permute_pd(vb, 0b0101);
        im_acc = _mm256_fmadd_pd(va, _mm256_mul_pd(vb_sw, sign), im_acc);
    }
    double re = hsum(re_acc);
    double im = hsum(im_acc);
    for (; i < n; ++i) {
        re += pa[2 * i] * pb[2 * i] + pa[2 * i + 1] * pb[2 * i + 1];
        im += pa[2 * i] * pb[2 * i + 1] - pa[2 * i + 1] * pb[2 * i];
    }
    return {re, im};
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double out = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        out += d * d;
    }
    return out;
}

void rotate_pair(double* x, double* y, std::size_t n, double c, double s) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(x + i, _mm256_fmsub_pd(vc, vx, _mm256_mul_pd(vs, vy)));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, vx, _mm256_mul_pd(vc, vy)));
    }
    for (; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

}  // namespace qclust::kernels::avx2

#endif  // QCLUST_HAVE_AVX2
