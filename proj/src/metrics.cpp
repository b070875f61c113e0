#include "qclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "qclust/kernels.hpp"

namespace qclust::metrics {

namespace {

// Validates the partition and returns k = max label + 1.
int partition_k(const Dataset& data, const std::vector<int>& assignments) {
    if (assignments.size() != data.rows) {
        throw UsageError("assignments length does not match dataset rows");
    }
    if (data.rows == 0) throw UsageError("empty dataset");
    int k = 0;
    for (int a : assignments) {
        if (a < 0) throw UsageError("negative cluster label");
        k = std::max(k, a + 1);
    }
    std::vector<std::size_t> sizes(k, 0);
    for (int a : assignments) ++sizes[a];
    for (int c = 0; c < k; ++c) {
        if (sizes[c] == 0) {
            throw MetricUndefinedError("cluster " + std::to_string(c) + " is empty");
        }
    }
    return k;
}

double dist(const Dataset& data, std::size_t i, std::size_t j) {
    return std::sqrt(kernels::sq_dist(data.row(i).data(), data.row(j).data(), data.cols));
}

Dataset cluster_means(const Dataset& data, const std::vector<int>& assignments, int k,
                      std::vector<std::size_t>& sizes) {
    Dataset means(k, data.cols);
    sizes.assign(k, 0);
    for (std::size_t i = 0; i < data.rows; ++i) {
        ++sizes[assignments[i]];
        const auto row = data.row(i);
        for (std::size_t j = 0; j < data.cols; ++j) means.at(assignments[i], j) += row[j];
    }
    for (int c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < data.cols; ++j) {
            means.at(c, j) /= static_cast<double>(sizes[c]);
        }
    }
    return means;
}

}  // namespace

double silhouette(const Dataset& data, const std::vector<int>& assignments) {
    const int k = partition_k(data, assignments);
    if (k < 2) throw MetricUndefinedError("silhouette requires at least 2 clusters");
    const std::size_t m = data.rows;

    std::vector<std::size_t> sizes(k, 0);
    for (int a : assignments) ++sizes[a];

    // dist_sum[i * k + c] = total distance from point i to cluster c members.
    std::vector<double> dist_sum(m * static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = dist(data, i, j);
            dist_sum[i * k + assignments[j]] += d;
            dist_sum[j * k + assignments[i]] += d;
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const int own = assignments[i];
        if (sizes[own] == 1) continue;  // singleton contributes 0
        const double a = dist_sum[i * k + own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own) continue;
            b = std::min(b, dist_sum[i * k + c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(m);
}

double davies_bouldin(const Dataset& data, const std::vector<int>& assignments) {
    const int k = partition_k(data, assignments);
    if (k < 2) throw MetricUndefinedError("Davies-Bouldin requires at least 2 clusters");

    std::vector<std::size_t> sizes;
    const Dataset means = cluster_means(data, assignments, k, sizes);

    std::vector<double> spread(k, 0.0);  // mean member-to-centroid distance
    for (std::size_t i = 0; i < data.rows; ++i) {
        const int c = assignments[i];
        spread[c] += std::sqrt(kernels::sq_dist(data.row(i).data(), means.row(c).data(),
                                                data.cols));
    }
    for (int c = 0; c < k; ++c) spread[c] /= static_cast<double>(sizes[c]);

    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            const double d = std::sqrt(kernels::sq_dist(means.row(i).data(),
                                                        means.row(j).data(), data.cols));
            if (d == 0.0) {
                throw MetricUndefinedError("coincident centroids for clusters " +
                                           std::to_string(i) + " and " + std::to_string(j));
            }
            worst = std::max(worst, (spread[i] + spread[j]) / d);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

double calinski_harabasz(const Dataset& data, const std::vector<int>& assignments) {
    const int k = partition_k(data, assignments);
    const std::size_t m = data.rows;
    if (k < 2) throw MetricUndefinedError("Calinski-Harabasz requires at least 2 clusters");
    if (static_cast<std::size_t>(k) == m) {
        throw MetricUndefinedError("Calinski-Harabasz is undefined for k = M");
    }

    std::vector<std::size_t> sizes;
    const Dataset means = cluster_means(data, assignments, k, sizes);

    std::vector<double> grand(data.cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = data.row(i);
        for (std::size_t j = 0; j < data.cols; ++j) grand[j] += row[j];
    }
    for (double& g : grand) g /= static_cast<double>(m);

    double between = 0.0;
    for (int c = 0; c < k; ++c) {
        between += static_cast<double>(sizes[c]) *
                   kernels::sq_dist(means.row(c).data(), grand.data(), data.cols);
    }
    double within = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        within += kernels::sq_dist(data.row(i).data(), means.row(assignments[i]).data(),
                                   data.cols);
    }
    if (within == 0.0) {
        throw MetricUndefinedError("zero within-cluster scatter (infinite score)");
    }
    return (between / static_cast<double>(k - 1)) /
           (within / static_cast<double>(m - static_cast<std::size_t>(k)));
}

double adjusted_rand_index(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
    if (labels_a.size() != labels_b.size()) {
        throw UsageError("label vectors must have equal length");
    }
    const std::size_t m = labels_a.size();
    if (m == 0) throw UsageError("empty label vectors");

    std::map<std::pair<int, int>, double> contingency;
    std::map<int, double> row_sum;
    std::map<int, double> col_sum;
    for (std::size_t i = 0; i < m; ++i) {
        contingency[{labels_a[i], labels_b[i]}] += 1.0;
        row_sum[labels_a[i]] += 1.0;
        col_sum[labels_b[i]] += 1.0;
    }
    auto choose2 = [](double n) { return n * (n - 1.0) / 2.0; };
    double index = 0.0;
    for (const auto& [key, n] : contingency) index += choose2(n);
    double sum_a = 0.0;
    for (const auto& [key, n] : row_sum) sum_a += choose2(n);
    double sum_b = 0.0;
    for (const auto& [key, n] : col_sum) sum_b += choose2(n);

    const double total_pairs = choose2(static_cast<double>(m));
    const double expected = sum_a * sum_b / total_pairs;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (std::abs(max_index - expected) < 1e-300) return 1.0;  // both partitions trivial
    return (index - expected) / (max_index - expected);
}

MetricReport compute_report(const Dataset& data, const std::vector<int>& assignments) {
    MetricReport report;
    report.k = partition_k(data, assignments);
    report.m = data.rows;
    report.silhouette = silhouette(data, assignments);
    report.davies_bouldin = davies_bouldin(data, assignments);
    report.calinski_harabasz = calinski_harabasz(data, assignments);
    return report;
}

}  // namespace qclust::metrics
