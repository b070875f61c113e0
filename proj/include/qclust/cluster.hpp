#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qclust/dataset.hpp"
#include "qclust/encode.hpp"

// Distance-pluggable K-means plus spectral clustering. The quantum variants
// differ from classical K-means only in the assignment rule (argmax fidelity
// instead of argmin Euclidean distance); the centroid update remains the
// arithmetic mean in feature space.

namespace qclust::cluster {

enum class DistanceMeasure { euclidean, swap_test, quantum_kernel };

struct KMeansConfig {
    int k = 1;
    int max_iter = 300;
    double tol = 1e-6;  // max centroid displacement threshold
    std::uint64_t seed = 0;
    DistanceMeasure measure = DistanceMeasure::euclidean;
    encode::FidelityMode fidelity_mode = encode::FidelityMode::Exact();
    encode::KernelMeasurement kernel_measurement = encode::KernelMeasurement::all_zeros;
    bool kmeans_plus_plus = false;  // default: k distinct rows drawn uniformly
    std::optional<Dataset> initial_centroids;  // explicit init, overrides seeding
};

struct ClusteringResult {
    Dataset centroids;             // k x N (embedding space for spectral)
    std::vector<int> assignments;  // size M, values in [0, k)
    int iterations = 0;
    std::vector<double> wcss_history;      // Euclidean WCSS after each update
    std::vector<double> fidelity_history;  // total fidelity per iteration (quantum only)
    bool converged = false;
};

ClusteringResult kmeans(const Dataset& data, const KMeansConfig& config);

/// One assignment pass: nearest centroid (euclidean) or highest fidelity
/// (quantum measures); ties go to the lowest cluster index.
std::vector<int> assign_step(
    const Dataset& data, const Dataset& centroids, DistanceMeasure measure,
    const encode::FidelityMode& mode = encode::FidelityMode::Exact(),
    encode::KernelMeasurement measurement = encode::KernelMeasurement::all_zeros);

/// Mean of each cluster's members. Throws UsageError if a cluster is empty
/// (the kmeans loop reseeds empty clusters before updating).
Dataset update_step(const Dataset& data, const std::vector<int>& assignments, int k);

/// Within-cluster sum of squared Euclidean errors of a result (always
/// Euclidean, independent of the clustering measure).
double wcss(const Dataset& data, const ClusteringResult& result);

/// Best WCSS over seeded restarts for each k in [k_min, k_max].
std::vector<std::pair<int, double>> elbow_curve(const Dataset& data, int k_min, int k_max,
                                                const KMeansConfig& base_config,
                                                int n_restarts = 10);

/// Elbow suggestion: k maximizing the discrete second difference of WCSS.
int suggest_k(std::span<const std::pair<int, double>> curve);

struct SpectralConfig {
    int k = 2;
    double sigma = 0.0;  // Gaussian bandwidth; <= 0 selects the median pairwise distance
    enum class Laplacian { normalized_symmetric, unnormalized };
    Laplacian laplacian = Laplacian::normalized_symmetric;
    std::uint64_t seed = 0;
    int restarts = 1;  // restarts of the embedded-space kmeans
};

/// Gaussian affinity graph -> Laplacian -> k smallest eigenvectors ->
/// row-normalized embedding -> euclidean kmeans. Centroids are reported in
/// embedding space; assignments index the original rows.
ClusteringResult spectral_cluster(const Dataset& data, const SpectralConfig& config);

using Matrix = Dataset;

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // column j pairs with eigenvalues[j]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Throws UsageError if the input is not square-symmetric within 1e-9.
EigResult symmetric_eig(const Matrix& a);

namespace detail {

/// Similarity evaluated between a data row and a centroid; assignments take
/// the argmax. Euclidean distance participates as negated squared distance.
using SimilarityFn =
    std::function<double(std::span<const double>, std::span<const double>)>;

SimilarityFn make_similarity(DistanceMeasure measure, const encode::FidelityMode& mode,
                             encode::KernelMeasurement measurement);

/// Core loop with an injected similarity; lets tests substitute the analytic
/// fidelity oracle for the circuit-backed measures.
ClusteringResult kmeans_with_similarity(const Dataset& data, const KMeansConfig& config,
                                        const SimilarityFn& similarity, bool record_fidelity);

}  // namespace detail

}  // namespace qclust::cluster
