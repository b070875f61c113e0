#pragma once

#include <cstddef>
#include <vector>

#include "qclust/dataset.hpp"

// Clustering quality metrics (Euclidean throughout): Rousseeuw silhouette,
// Davies-Bouldin, Calinski-Harabasz, plus the adjusted Rand index used as a
// test oracle. All require cluster ids in [0, k) with every cluster occupied.

namespace qclust::metrics {

struct MetricReport {
    double silhouette = 0.0;        // in [-1, 1]
    double davies_bouldin = 0.0;    // >= 0, lower is better
    double calinski_harabasz = 0.0; // >= 0, higher is better
    int k = 0;
    std::size_t m = 0;
};

/// Mean over points of (b - a) / max(a, b); singleton-cluster points
/// contribute 0. Throws MetricUndefinedError for k < 2.
double silhouette(const Dataset& data, const std::vector<int>& assignments);

/// Mean over clusters of the worst (s_i + s_j) / d_ij ratio. Throws
/// MetricUndefinedError for k < 2 or coincident centroids.
double davies_bouldin(const Dataset& data, const std::vector<int>& assignments);

/// (B / (k-1)) / (W / (M-k)). Throws MetricUndefinedError for k < 2, k = M,
/// or zero within-cluster scatter.
double calinski_harabasz(const Dataset& data, const std::vector<int>& assignments);

/// Chance-corrected pair-counting agreement between two partitions.
double adjusted_rand_index(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

/// All three metrics for one partition.
MetricReport compute_report(const Dataset& data, const std::vector<int>& assignments);

}  // namespace qclust::metrics
