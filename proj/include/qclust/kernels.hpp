#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops shared by the simulator, the clustering engine
// and the eigensolver. Each kernel has a scalar reference implementation and
// (on x86-64) an AVX2 variant; the unqualified entry points dispatch at
// runtime. The QCLUST_SIMD environment variable ("scalar" / "avx2") forces a
// lane, which the equivalence tests use.

namespace qclust::kernels {

enum class Isa { scalar, avx2 };

/// ISA selected for this process (CPUID probe, QCLUST_SIMD override).
Isa active_isa();
const char* isa_name(Isa isa);

/// Real 2x2 matrix applied in place across two amplitude blocks:
///   a0[i] <- m00*a0[i] + m01*a1[i],  a1[i] <- m10*a0[i] + m11*a1[i]
void apply_real_2x2(std::complex<double>* a0, std::complex<double>* a1,
                    std::size_t n, double m00, double m01, double m10, double m11);

/// Sum of |a[i]|^2.
double norm_sq(const std::complex<double>* a, std::size_t n);

/// Conjugate-linear dot product sum_i conj(a[i]) * b[i].
std::complex<double> cdot(const std::complex<double>* a,
                          const std::complex<double>* b, std::size_t n);

/// Squared Euclidean distance between two real vectors.
double sq_dist(const double* a, const double* b, std::size_t n);

/// Plane rotation in place: x[i] <- c*x[i] - s*y[i],  y[i] <- s*x[i] + c*y[i].
void rotate_pair(double* x, double* y, std::size_t n, double c, double s);

namespace scalar {
void apply_real_2x2(std::complex<double>* a0, std::complex<double>* a1,
                    std::size_t n, double m00, double m01, double m10, double m11);
double norm_sq(const std::complex<double>* a, std::size_t n);
std::complex<double> cdot(const std::complex<double>* a,
                          const std::complex<double>* b, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
void rotate_pair(double* x, double* y, std::size_t n, double c, double s);
}  // namespace scalar

#if defined(QCLUST_HAVE_AVX2)
namespace avx2 {
void apply_real_2x2(std::complex<double>* a0, std::complex<double>* a1,
                    std::size_t n, double m00, double m01, double m10, double m11);
double norm_sq(const std::complex<double>* a, std::size_t n);
std::complex<double> cdot(const std::complex<double>* a,
                          const std::complex<double>* b, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
void rotate_pair(double* x, double* y, std::size_t n, double c, double s);
}  // namespace avx2
#endif

}  // namespace qclust::kernels
