#include "qclust/encode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qclust/error.hpp"

namespace qclust::encode {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRangeSlack = 1e-9;  // snap tolerance at the interval ends

std::vector<double> validate_angles(std::vector<double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= -kRangeSlack && v[i] <= kPi + kRangeSlack)) {
            throw EncodingError("angle entry " + std::to_string(i) + " (" +
                                std::to_string(v[i]) + ") outside [0, pi]");
        }
        v[i] = std::clamp(v[i], 0.0, kPi);
    }
    return v;
}

void check_same_dim(const AngleVector& x, const AngleVector& c) {
    if (x.size() != c.size()) {
        throw UsageError("fidelity requires equal feature dimensions (" +
                         std::to_string(x.size()) + " vs " + std::to_string(c.size()) + ")");
    }
    if (x.size() == 0) throw UsageError("fidelity requires at least one feature");
}

double clamp01(double f) { return std::clamp(f, 0.0, 1.0); }

// Per-call seed so sampled fidelities are reproducible independent of
// evaluation order: FNV-1a over a circuit tag, the base seed, and both
// operand vectors.
std::uint64_t derive_seed(std::uint64_t seed, char tag, std::span<const double> x,
                          std::span<const double> c) {
    std::uint64_t h = 1469598103934665603ull;
    auto absorb = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) h = (h ^ b[i]) * 1099511628211ull;
    };
    absorb(&tag, 1);
    absorb(&seed, sizeof(seed));
    absorb(x.data(), x.size() * sizeof(double));
    absorb(c.data(), c.size() * sizeof(double));
    return h;
}

}  // namespace

AngleVector::AngleVector(std::vector<double> values) : values_(validate_angles(std::move(values))) {}

AngleVector::AngleVector(std::initializer_list<double> values)
    : AngleVector(std::vector<double>(values)) {}

AngleVector AngleVector::from_span(std::span<const double> values) {
    return AngleVector(std::vector<double>(values.begin(), values.end()));
}

FidelityMode FidelityMode::Sampled(std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw UsageError("sampled fidelity requires shots >= 1");
    return {Kind::sampled, shots, seed};
}

qsim::StateVector angle_encode(const AngleVector& x) {
    if (x.size() == 0) throw EncodingError("cannot encode an empty feature vector");
    qsim::StateVector sv(static_cast<int>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        sv.apply_ry(static_cast<int>(i), 2.0 * x[i]);
    }
    return sv;
}

qsim::StateVector amplitude_encode(std::span<const double> x) {
    if (x.empty()) throw EncodingError("cannot encode an empty feature vector");
    double norm_sq = 0.0;
    for (double v : x) norm_sq += v * v;
    if (norm_sq == 0.0) throw EncodingError("cannot amplitude-encode the zero vector");
    const double inv_norm = 1.0 / std::sqrt(norm_sq);

    int n_qubits = 1;
    while ((std::size_t{1} << n_qubits) < x.size()) ++n_qubits;
    std::vector<std::complex<double>> amps(std::size_t{1} << n_qubits, {0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i) amps[i] = {x[i] * inv_norm, 0.0};
    return qsim::StateVector::from_amplitudes(n_qubits, std::move(amps));
}

int swap_test_qubit_count(int n_features) { return 2 * n_features + 1; }

int kernel_qubit_count(int n_features) { return n_features; }

qsim::StateVector swap_test_state(const AngleVector& x, const AngleVector& c) {
    check_same_dim(x, c);
    const int n = static_cast<int>(x.size());
    const int ancilla = 2 * n;
    qsim::StateVector sv(swap_test_qubit_count(n));
    sv.apply_hadamard(ancilla);
    for (int i = 0; i < n; ++i) {
        sv.apply_ry(i, 2.0 * x[i]);      // data block
        sv.apply_ry(n + i, 2.0 * c[i]);  // centroid block
    }
    for (int i = 0; i < n; ++i) {
        sv.apply_cswap(ancilla, i, n + i);
    }
    sv.apply_hadamard(ancilla);
    return sv;
}

double swap_test_p0(const AngleVector& x, const AngleVector& c) {
    const auto sv = swap_test_state(x, c);
    return sv.prob_zero(sv.num_qubits() - 1);
}

double swap_test_fidelity(const AngleVector& x, const AngleVector& c, const FidelityMode& mode) {
    const auto sv = swap_test_state(x, c);
    const int ancilla = sv.num_qubits() - 1;
    double p0;
    if (mode.is_exact()) {
        p0 = sv.prob_zero(ancilla);
    } else {
        const auto seed = derive_seed(mode.seed, 's', x.values(), c.values());
        const auto zeros = sv.sample_zero_count(ancilla, mode.shots, seed);
        p0 = static_cast<double>(zeros) / static_cast<double>(mode.shots);
    }
    return clamp01(2.0 * p0 - 1.0);
}

qsim::StateVector kernel_state(const AngleVector& x, const AngleVector& c) {
    check_same_dim(x, c);
    const int n = static_cast<int>(x.size());
    qsim::StateVector sv(kernel_qubit_count(n));
    for (int i = 0; i < n; ++i) sv.apply_ry(i, 2.0 * x[i]);
    for (int i = 0; i < n; ++i) sv.apply_ry(i, -2.0 * c[i]);  // adjoint of U(c)
    return sv;
}

double kernel_fidelity(const AngleVector& x, const AngleVector& c, const FidelityMode& mode,
                       KernelMeasurement measurement) {
    const auto sv = kernel_state(x, c);
    const double p = measurement == KernelMeasurement::all_zeros ? sv.prob_all_zero()
                                                                 : sv.prob_zero(0);
    if (mode.is_exact()) return clamp01(p);
    const auto seed = derive_seed(mode.seed, 'k', x.values(), c.values());
    const auto hits = qsim::binomial_count(p, mode.shots, seed);
    return clamp01(static_cast<double>(hits) / static_cast<double>(mode.shots));
}

double analytic_fidelity(const AngleVector& x, const AngleVector& c) {
    check_same_dim(x, c);
    double f = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double cf = std::cos(x[i] - c[i]);
        f *= cf * cf;
    }
    return f;
}

}  // namespace qclust::encode
