#include <doctest.h>

#include <algorithm>
#include <random>

#include "brute_oracles.hpp"
#include "qclust/error.hpp"
#include "qclust/metrics.hpp"

using namespace qclust;

namespace {

// Two tight pairs far apart; oracle values frozen from the brute-force
// implementations below.
Dataset fixture_pairs() {
    return Dataset::from_rows({{0, 0}, {0, 1}, {10, 10}, {10, 11}});
}
const std::vector<int> kPairLabels = {0, 0, 1, 1};

Dataset random_dataset(std::size_t m, std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Dataset d(m, n);
    for (double& v : d.values) v = u(rng);
    return d;
}

std::vector<int> random_partition(std::size_t m, int k, std::mt19937_64& rng) {
    std::vector<int> labels(m);
    for (std::size_t i = 0; i < m; ++i) {
        labels[i] = static_cast<int>(i) < k ? static_cast<int>(i)  // every cluster occupied
                                            : static_cast<int>(rng() % k);
    }
    return labels;
}

}  // namespace

TEST_CASE("silhouette on the two-pair fixture") {
    const auto data = fixture_pairs();
    const double s = metrics::silhouette(data, kPairLabels);
    CHECK(s > 0.9);
    CHECK(s == doctest::Approx(0.929289542711866).epsilon(1e-12));
    CHECK(s == doctest::Approx(brute::silhouette(data, kPairLabels)).epsilon(1e-12));
}

TEST_CASE("silhouette degenerate conventions") {
    // All points identical, two forced clusters: a = b = 0 -> contribution 0.
    const auto same = Dataset::from_rows({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
    CHECK(metrics::silhouette(same, {0, 0, 1, 1}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(metrics::silhouette(same, {0, 0, 0, 0}), MetricUndefinedError);
}

TEST_CASE("davies-bouldin fixtures") {
    // Two point-mass clusters have zero spread.
    const auto masses = Dataset::from_rows({{0, 0}, {0, 0}, {5, 5}, {5, 5}});
    CHECK(metrics::davies_bouldin(masses, {0, 0, 1, 1}) == doctest::Approx(0.0));

    const auto data = fixture_pairs();
    const double db = metrics::davies_bouldin(data, kPairLabels);
    CHECK(db == doctest::Approx(0.070710678118655).epsilon(1e-12));
    CHECK(db == doctest::Approx(brute::davies_bouldin(data, kPairLabels)).epsilon(1e-12));

    // Coincident centroids are an explicit error, not a silent infinity.
    const auto coincident = Dataset::from_rows({{0, 0}, {2, 2}, {1, 0}, {1, 2}});
    CHECK_THROWS_AS(metrics::davies_bouldin(coincident, {0, 0, 1, 1}), MetricUndefinedError);
}

TEST_CASE("calinski-harabasz fixtures") {
    const auto data = fixture_pairs();
    const double ch = metrics::calinski_harabasz(data, kPairLabels);
    CHECK(ch == doctest::Approx(400.0).epsilon(1e-12));
    CHECK(ch == doctest::Approx(brute::calinski_harabasz(data, kPairLabels)).epsilon(1e-12));

    // Direct formula evaluation on a single-feature 6-point set.
    const auto six = Dataset::from_rows({{0.0}, {0.4}, {1.1}, {3.0}, {3.3}, {4.0}});
    const std::vector<int> labels = {0, 0, 0, 1, 1, 1};
    CHECK(metrics::calinski_harabasz(six, labels) ==
          doctest::Approx(brute::calinski_harabasz(six, labels)).epsilon(1e-12));

    CHECK_THROWS_AS(metrics::calinski_harabasz(six, {0, 1, 2, 3, 4, 5}), MetricUndefinedError);
    const auto same = Dataset::from_rows({{1, 1}, {1, 1}, {2, 2}, {2, 2}});
    CHECK_THROWS_AS(metrics::calinski_harabasz(same, {0, 0, 1, 1}), MetricUndefinedError);
}

TEST_CASE("adjusted rand index") {
    CHECK(metrics::adjusted_rand_index({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(metrics::adjusted_rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));

    // Hand value from the contingency table: (4 - 2.8) / (6.5 - 2.8) = 12/37.
    const std::vector<int> a = {0, 0, 0, 1, 1, 1};
    const std::vector<int> b = {0, 0, 1, 1, 1, 1};
    CHECK(metrics::adjusted_rand_index(a, b) == doctest::Approx(12.0 / 37.0).epsilon(1e-12));
    CHECK(metrics::adjusted_rand_index(a, b) ==
          doctest::Approx(brute::adjusted_rand_index(a, b)).epsilon(1e-12));

    CHECK_THROWS_AS(metrics::adjusted_rand_index({0, 1}, {0, 1, 1}), UsageError);
}

TEST_CASE("all metrics match the brute-force oracles on random data") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 6 + rng() % 25;  // M <= 30
        const int k = 2 + static_cast<int>(rng() % 3);
        const auto data = random_dataset(m, 2 + rng() % 3, rng);
        const auto labels = random_partition(m, k, rng);

        CHECK(metrics::silhouette(data, labels) ==
              doctest::Approx(brute::silhouette(data, labels)).epsilon(1e-9));
        CHECK(metrics::davies_bouldin(data, labels) ==
              doctest::Approx(brute::davies_bouldin(data, labels)).epsilon(1e-9));
        CHECK(metrics::calinski_harabasz(data, labels) ==
              doctest::Approx(brute::calinski_harabasz(data, labels)).epsilon(1e-9));
    }
}

TEST_CASE("metrics are invariant to relabeling and row permutation") {
    std::mt19937_64 rng(77);
    const auto data = random_dataset(24, 2, rng);
    const auto labels = random_partition(24, 3, rng);
    const auto report = metrics::compute_report(data, labels);

    // Relabel 0<->2.
    std::vector<int> relabeled(labels);
    for (int& l : relabeled) l = l == 0 ? 2 : l == 2 ? 0 : l;
    CHECK(metrics::silhouette(data, relabeled) == doctest::Approx(report.silhouette).epsilon(1e-12));
    CHECK(metrics::davies_bouldin(data, relabeled) ==
          doctest::Approx(report.davies_bouldin).epsilon(1e-12));
    CHECK(metrics::calinski_harabasz(data, relabeled) ==
          doctest::Approx(report.calinski_harabasz).epsilon(1e-12));

    // Permute rows together with labels.
    std::vector<std::size_t> perm(24);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Dataset permuted(24, data.cols);
    std::vector<int> permuted_labels(24);
    for (std::size_t i = 0; i < 24; ++i) {
        for (std::size_t c = 0; c < data.cols; ++c) permuted.at(i, c) = data.at(perm[i], c);
        permuted_labels[i] = labels[perm[i]];
    }
    CHECK(metrics::silhouette(permuted, permuted_labels) ==
          doctest::Approx(report.silhouette).epsilon(1e-12));
    CHECK(metrics::davies_bouldin(permuted, permuted_labels) ==
          doctest::Approx(report.davies_bouldin).epsilon(1e-12));
    CHECK(metrics::calinski_harabasz(permuted, permuted_labels) ==
          doctest::Approx(report.calinski_harabasz).epsilon(1e-12));
}

TEST_CASE("pulling clusters apart improves every metric monotonically") {
    auto make = [](double gap) {
        return Dataset::from_rows(
            {{0, 0}, {0, 1}, {1, 0.5}, {gap, 0}, {gap, 1}, {gap + 1, 0.5}});
    };
    const std::vector<int> labels = {0, 0, 0, 1, 1, 1};
    const auto near = metrics::compute_report(make(4.0), labels);
    const auto far = metrics::compute_report(make(12.0), labels);
    CHECK(far.silhouette > near.silhouette);
    CHECK(far.calinski_harabasz > near.calinski_harabasz);
    CHECK(far.davies_bouldin < near.davies_bouldin);
}

TEST_CASE("metric ranges hold on random partitions") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto data = random_dataset(12 + rng() % 10, 2, rng);
        const auto labels = random_partition(data.rows, 2 + static_cast<int>(rng() % 3), rng);
        const auto report = metrics::compute_report(data, labels);
        CHECK(report.silhouette >= -1.0);
        CHECK(report.silhouette <= 1.0);
        CHECK(report.davies_bouldin >= 0.0);
        CHECK(report.calinski_harabasz >= 0.0);
    }
}
