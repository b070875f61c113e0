#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "qclust/qsim.hpp"

// Feature-vector encodings and the quantum distance oracles built on them:
// the CSWAP-test fidelity, the kernel-overlap fidelity, and the closed-form
// product-cosine fidelity used as the independent oracle.

namespace qclust::encode {

/// Angles in [0, pi], one per feature. Validated at construction; values a
/// rounding error outside the range are snapped to the boundary.
class AngleVector {
  public:
    explicit AngleVector(std::vector<double> values);
    AngleVector(std::initializer_list<double> values);
    static AngleVector from_span(std::span<const double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

  private:
    std::vector<double> values_;
};

/// Exact expectation or shot-based estimation of a fidelity.
struct FidelityMode {
    enum class Kind { exact, sampled };
    Kind kind = Kind::exact;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    static FidelityMode Exact() { return {}; }
    static FidelityMode Sampled(std::uint64_t shots, std::uint64_t seed);
    bool is_exact() const { return kind == Kind::exact; }
};

/// Which projector the kernel circuit measures. The overlap definition uses
/// the all-zeros outcome; first_qubit is the alternative single-qubit readout.
enum class KernelMeasurement { all_zeros, first_qubit };

/// Product state ⊗_i (cos(x_i)|0> + sin(x_i)|1>), one qubit per feature,
/// prepared as RY(2 x_i) on |0...0>.
qsim::StateVector angle_encode(const AngleVector& x);

/// L2-normalizes, zero-pads to the next power of two, and writes the entries
/// as amplitudes. Throws EncodingError for an all-zero input.
qsim::StateVector amplitude_encode(std::span<const double> x);

/// Qubit budgets of the two circuits for N features.
int swap_test_qubit_count(int n_features);  // 2N + 1
int kernel_qubit_count(int n_features);     // N

/// Post-circuit state of the swap test: x on qubits [0,N), c on [N,2N),
/// ancilla (Hadamard-CSWAP-Hadamard) on qubit 2N.
qsim::StateVector swap_test_state(const AngleVector& x, const AngleVector& c);

/// Exact ancilla zero-probability of the swap test, (1 + F)/2.
double swap_test_p0(const AngleVector& x, const AngleVector& c);

/// Swap-test fidelity estimate F = clamp(2 P(0) - 1, 0, 1).
double swap_test_fidelity(const AngleVector& x, const AngleVector& c, const FidelityMode& mode);

/// State after RY(2 x_i) followed by RY(-2 c_i) on each of N qubits.
qsim::StateVector kernel_state(const AngleVector& x, const AngleVector& c);

/// Kernel-overlap fidelity |<0|U†(c)U(x)|0>|^2, measured via the selected
/// projector.
double kernel_fidelity(const AngleVector& x, const AngleVector& c, const FidelityMode& mode,
                       KernelMeasurement measurement = KernelMeasurement::all_zeros);

/// Closed-form fidelity for angle-encoded product states: prod_i cos^2(x_i - c_i).
double analytic_fidelity(const AngleVector& x, const AngleVector& c);

}  // namespace qclust::encode
