#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

// Dense statevector simulator. Exactly the gate set the two fidelity
// circuits need: Hadamard, RY, CSWAP, plus Z-basis probability queries.
// Qubit 0 is the least significant bit of the basis-state index.

namespace qclust::qsim {

inline constexpr int kMaxQubits = 12;
inline constexpr double kNormTol = 1e-10;  // norm-preservation tolerance
inline constexpr double kEqTol = 1e-12;    // amplitude equality tolerance

class StateVector {
  public:
    /// Prepares |0...0> on n_qubits. Throws ConfigError outside [1, 12].
    explicit StateVector(int n_qubits);

    /// Wraps an explicit amplitude array (must have length 2^n_qubits and
    /// unit norm within kNormTol). Used by amplitude encoding and tests.
    static StateVector from_amplitudes(int n_qubits, std::vector<std::complex<double>> amps);

    int num_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const std::complex<double>> amps() const { return amps_; }

    void apply_hadamard(int q);
    void apply_ry(int q, double theta);
    void apply_cswap(int control, int a, int b);

    /// Probability that measuring qubit q yields 0. Does not mutate.
    double prob_zero(int q) const;

    /// Probability of the all-zeros outcome, |amps[0]|^2.
    double prob_all_zero() const;

    /// Number of zero outcomes among `shots` simulated measurements of
    /// qubit q. Deterministic for a fixed seed; the state is not collapsed.
    std::uint64_t sample_zero_count(int q, std::uint64_t shots, std::uint64_t seed) const;

    double norm_sq() const;

  private:
    StateVector() = default;
    void check_qubit(int q, const char* role) const;

    int n_qubits_ = 0;
    std::vector<std::complex<double>> amps_;
};

/// Conjugate-linear inner product <a|b>. Throws UsageError on qubit-count mismatch.
std::complex<double> inner_product(const StateVector& a, const StateVector& b);

/// Deterministic binomial draw: zeros among `shots` Bernoulli(p) trials.
std::uint64_t binomial_count(double p, std::uint64_t shots, std::uint64_t seed);

}  // namespace qclust::qsim
