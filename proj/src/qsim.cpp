#include "qclust/qsim.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qclust/error.hpp"
#include "qclust/kernels.hpp"

namespace qclust::qsim {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

// Applies a real 2x2 matrix to qubit q. Amplitude pairs (i, i + 2^q) form
// contiguous runs of length 2^q, which the kernel consumes directly.
void apply_single_qubit_real(std::vector<std::complex<double>>& amps, int q,
                             double m00, double m01, double m10, double m11) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        kernels::apply_real_2x2(&amps[base], &amps[base + stride], stride, m00, m01, m10, m11);
    }
}

}  // namespace

StateVector::StateVector(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    n_qubits_ = n_qubits;
    amps_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
    amps_[0] = {1.0, 0.0};
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<std::complex<double>> amps) {
    StateVector sv(n_qubits);
    if (amps.size() != sv.dim()) {
        throw UsageError("amplitude array length " + std::to_string(amps.size()) +
                         " does not match 2^" + std::to_string(n_qubits));
    }
    sv.amps_ = std::move(amps);
    if (std::abs(sv.norm_sq() - 1.0) > kNormTol) {
        throw UsageError("amplitude array is not normalized");
    }
    return sv;
}

void StateVector::check_qubit(int q, const char* role) const {
    if (q < 0 || q >= n_qubits_) {
        throw UsageError(std::string(role) + " qubit index " + std::to_string(q) +
                         " out of range for " + std::to_string(n_qubits_) + " qubits");
    }
}

void StateVector::apply_hadamard(int q) {
    check_qubit(q, "target");
    apply_single_qubit_real(amps_, q, kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
}

void StateVector::apply_ry(int q, double theta) {
    check_qubit(q, "target");
    if (!std::isfinite(theta)) throw UsageError("RY angle is not finite");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    apply_single_qubit_real(amps_, q, c, -s, s, c);
}

void StateVector::apply_cswap(int control, int a, int b) {
    check_qubit(control, "control");
    check_qubit(a, "swap");
    check_qubit(b, "swap");
    if (control == a || control == b || a == b) {
        throw UsageError("CSWAP requires three distinct qubit indices");
    }
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t abit = std::size_t{1} << a;
    const std::size_t bbit = std::size_t{1} << b;
    const std::size_t dim = amps_.size();
    // Visit each swapped pair once via the (a=1, b=0) representative.
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cbit) && (i & abit) && !(i & bbit)) {
            std::swap(amps_[i], amps_[i ^ (abit | bbit)]);
        }
    }
}

double StateVector::prob_zero(int q) const {
    check_qubit(q, "measured");
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    double p = 0.0;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        p += kernels::norm_sq(&amps_[base], stride);
    }
    return p;
}

double StateVector::prob_all_zero() const { return std::norm(amps_[0]); }

std::uint64_t StateVector::sample_zero_count(int q, std::uint64_t shots,
                                             std::uint64_t seed) const {
    return binomial_count(prob_zero(q), shots, seed);
}

double StateVector::norm_sq() const { return kernels::norm_sq(amps_.data(), amps_.size()); }

std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw UsageError("inner product requires equal qubit counts");
    }
    return kernels::cdot(a.amps().data(), b.amps().data(), a.dim());
}

std::uint64_t binomial_count(double p, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw UsageError("shot count must be at least 1");
    if (p <= 0.0) return 0;
    if (p >= 1.0) return shots;
    std::mt19937_64 rng(seed);
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < shots; ++i) {
        // Top 53 bits -> uniform double in [0, 1); avoids distribution
        // objects so sequences are identical across standard libraries.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) ++count;
    }
    return count;
}

}  // namespace qclust::qsim
