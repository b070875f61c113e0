#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "brute_oracles.hpp"
#include "qclust/cluster.hpp"
#include "qclust/encode.hpp"
#include "qclust/error.hpp"
#include "qclust/metrics.hpp"

using namespace qclust;
using cluster::DistanceMeasure;
using cluster::KMeansConfig;

namespace {

constexpr double kPi = std::numbers::pi;

Dataset random_dataset(std::size_t m, std::size_t n, double lo, double hi,
                       std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    Dataset d(m, n);
    for (double& v : d.values) v = u(rng);
    return d;
}

bool same_result(const cluster::ClusteringResult& a, const cluster::ClusteringResult& b) {
    return a.assignments == b.assignments && a.centroids.values == b.centroids.values &&
           a.iterations == b.iterations && a.wcss_history == b.wcss_history &&
           a.converged == b.converged;
}

}  // namespace

TEST_CASE("kmeans groups a well-separated rectangle by proximity") {
    const auto data = Dataset::from_rows({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
    KMeansConfig cfg;
    cfg.k = 2;
    // Best of a few restarts, as the pipeline runs it; a single unlucky seed
    // can settle on the cross-pairing local optimum.
    cluster::ClusteringResult result;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 5; ++r) {
        cfg.seed = r;
        auto candidate = cluster::kmeans(data, cfg);
        const double w = cluster::wcss(data, candidate);
        if (w < best) {
            best = w;
            result = std::move(candidate);
        }
    }

    CHECK(result.converged);
    CHECK(result.assignments[0] == result.assignments[1]);
    CHECK(result.assignments[2] == result.assignments[3]);
    CHECK(result.assignments[0] != result.assignments[2]);

    // Exhaustive bipartition oracle: the best WCSS is the global optimum,
    // which equals the sum of within-pair half-distances squared (2 * 0.5 each).
    const auto [best_labels, best_wcss] = brute::best_two_partition(data);
    CHECK(best == doctest::Approx(best_wcss).epsilon(1e-12));
    CHECK(best == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("k equal to M gives a zero-WCSS singleton clustering") {
    std::mt19937_64 rng(5);
    const auto data = random_dataset(7, 2, 0.0, 1.0, rng);
    KMeansConfig cfg;
    cfg.k = 7;
    cfg.seed = 3;
    const auto result = cluster::kmeans(data, cfg);
    CHECK(cluster::wcss(data, result) == doctest::Approx(0.0));
}

TEST_CASE("kmeans is deterministic for a fixed config") {
    std::mt19937_64 rng(6);
    const auto data = random_dataset(40, 2, 0.0, 1.0, rng);
    KMeansConfig cfg;
    cfg.k = 4;
    cfg.seed = 9;
    CHECK(same_result(cluster::kmeans(data, cfg), cluster::kmeans(data, cfg)));

    cfg.measure = DistanceMeasure::swap_test;
    const auto quantum_data = random_dataset(20, 2, 0.0, kPi, rng);
    CHECK(same_result(cluster::kmeans(quantum_data, cfg), cluster::kmeans(quantum_data, cfg)));

    cfg.fidelity_mode = encode::FidelityMode::Sampled(200, 5);
    CHECK(same_result(cluster::kmeans(quantum_data, cfg), cluster::kmeans(quantum_data, cfg)));
}

TEST_CASE("kmeans rejects bad configurations") {
    const auto data = Dataset::from_rows({{0, 0}, {1, 1}});
    KMeansConfig cfg;
    cfg.k = 3;
    CHECK_THROWS_AS(cluster::kmeans(data, cfg), ConfigError);

    cfg.k = 1;
    auto bad = data;
    bad.values[1] = std::nan("");
    CHECK_THROWS_AS(cluster::kmeans(bad, cfg), DataError);
}

TEST_CASE("assign_step fixtures") {
    const auto centroids = Dataset::from_rows({{0.0, 0.0}, {1.0, 1.0}});

    // A point equal to a centroid lands on it (distance 0 / fidelity 1).
    const auto on_centroid = Dataset::from_rows({{1.0, 1.0}});
    CHECK(cluster::assign_step(on_centroid, centroids, DistanceMeasure::euclidean) ==
          std::vector<int>{1});
    CHECK(cluster::assign_step(on_centroid, centroids, DistanceMeasure::swap_test) ==
          std::vector<int>{1});

    // Equidistant points break ties toward the lowest index.
    const auto midpoint = Dataset::from_rows({{0.5, 0.5}});
    CHECK(cluster::assign_step(midpoint, centroids, DistanceMeasure::euclidean) ==
          std::vector<int>{0});
}

TEST_CASE("quantum-exact assignments equal analytic-fidelity assignments") {
    std::mt19937_64 rng(12);
    const auto data = random_dataset(10, 2, 0.0, kPi, rng);
    const auto centroids = random_dataset(3, 2, 0.0, kPi, rng);

    const auto via_circuit =
        cluster::assign_step(data, centroids, DistanceMeasure::swap_test);
    const auto via_kernel =
        cluster::assign_step(data, centroids, DistanceMeasure::quantum_kernel);

    const auto analytic = [&]() {
        std::vector<int> out(data.rows);
        for (std::size_t i = 0; i < data.rows; ++i) {
            int best = 0;
            double best_f = -1.0;
            for (std::size_t c = 0; c < centroids.rows; ++c) {
                const double f = encode::analytic_fidelity(
                    encode::AngleVector::from_span(data.row(i)),
                    encode::AngleVector::from_span(centroids.row(c)));
                if (f > best_f) {
                    best_f = f;
                    best = static_cast<int>(c);
                }
            }
            out[i] = best;
        }
        return out;
    }();

    CHECK(via_circuit == analytic);
    CHECK(via_kernel == analytic);
}

TEST_CASE("update_step computes per-cluster means") {
    const auto data = Dataset::from_rows({{0, 0}, {2, 2}, {4, 1}});
    const auto single = cluster::update_step(data, {0, 0, 0}, 1);
    CHECK(single.at(0, 0) == doctest::Approx(2.0));
    CHECK(single.at(0, 1) == doctest::Approx(1.0));

    const auto mixed = cluster::update_step(data, {0, 0, 1}, 2);
    CHECK(mixed.at(0, 0) == doctest::Approx(1.0));
    CHECK(mixed.at(0, 1) == doctest::Approx(1.0));
    CHECK(mixed.at(1, 0) == doctest::Approx(4.0));  // singleton cluster keeps its point

    CHECK_THROWS_AS(cluster::update_step(data, {0, 0, 0}, 2), UsageError);  // empty cluster
}

TEST_CASE("wcss hand values and history consistency") {
    const auto data = Dataset::from_rows({{0, 0}, {2, 0}});
    cluster::ClusteringResult manual;
    manual.centroids = Dataset::from_rows({{1, 0}});
    manual.assignments = {0, 0};
    CHECK(cluster::wcss(data, manual) == doctest::Approx(2.0));

    std::mt19937_64 rng(8);
    const auto random_data = random_dataset(30, 2, 0.0, 1.0, rng);
    KMeansConfig cfg;
    cfg.k = 3;
    cfg.seed = 2;
    const auto result = cluster::kmeans(random_data, cfg);
    CHECK(result.converged);
    CHECK(cluster::wcss(random_data, result) ==
          doctest::Approx(result.wcss_history.back()).epsilon(1e-12));
}

TEST_CASE("euclidean wcss history is non-increasing") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const auto data = random_dataset(20 + rng() % 180, 2, 0.0, 1.0, rng);
        KMeansConfig cfg;
        cfg.k = 2 + static_cast<int>(rng() % 5);
        cfg.seed = rng();
        const auto result = cluster::kmeans(data, cfg);
        for (std::size_t i = 1; i < result.wcss_history.size(); ++i) {
            CHECK(result.wcss_history[i] <= result.wcss_history[i - 1] + 1e-9);
        }
    }
}

TEST_CASE("quantum runs record total fidelity and terminate") {
    std::mt19937_64 rng(13);
    const auto data = random_dataset(25, 2, 0.0, kPi, rng);
    KMeansConfig cfg;
    cfg.k = 3;
    cfg.seed = 4;
    cfg.measure = DistanceMeasure::quantum_kernel;
    const auto result = cluster::kmeans(data, cfg);
    CHECK(result.iterations <= cfg.max_iter);
    CHECK(result.fidelity_history.size() == static_cast<std::size_t>(result.iterations));
    for (double f : result.fidelity_history) {
        CHECK(f >= 0.0);
        CHECK(f <= static_cast<double>(data.rows) + 1e-9);
    }
}

TEST_CASE("swap-test kmeans equals kmeans with the analytic oracle, iteration by iteration") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        const auto data = random_dataset(30, 2, 0.0, kPi, rng);
        KMeansConfig cfg;
        cfg.k = 3;
        cfg.seed = 1000 + trial;
        cfg.measure = DistanceMeasure::swap_test;
        const auto circuit = cluster::kmeans(data, cfg);

        const auto analytic = cluster::detail::kmeans_with_similarity(
            data, cfg,
            [](std::span<const double> x, std::span<const double> c) {
                return encode::analytic_fidelity(encode::AngleVector::from_span(x),
                                                 encode::AngleVector::from_span(c));
            },
            true);

        CHECK(circuit.assignments == analytic.assignments);
        CHECK(circuit.iterations == analytic.iterations);
        REQUIRE(circuit.centroids.values.size() == analytic.centroids.values.size());
        for (std::size_t i = 0; i < circuit.centroids.values.size(); ++i) {
            CHECK(circuit.centroids.values[i] ==
                  doctest::Approx(analytic.centroids.values[i]).epsilon(1e-12));
        }
        for (std::size_t i = 0; i < circuit.fidelity_history.size(); ++i) {
            CHECK(circuit.fidelity_history[i] ==
                  doctest::Approx(analytic.fidelity_history[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("permutation equivariance with explicit initial centroids") {
    std::mt19937_64 rng(31);
    const auto data = random_dataset(18, 2, 0.0, 1.0, rng);
    KMeansConfig cfg;
    cfg.k = 3;
    cfg.initial_centroids = Dataset::from_rows({{0.1, 0.1}, {0.5, 0.5}, {0.9, 0.9}});
    const auto base = cluster::kmeans(data, cfg);

    std::vector<std::size_t> perm(data.rows);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Dataset permuted(data.rows, data.cols);
    for (std::size_t i = 0; i < data.rows; ++i) {
        for (std::size_t c = 0; c < data.cols; ++c) permuted.at(i, c) = data.at(perm[i], c);
    }
    const auto shuffled = cluster::kmeans(permuted, cfg);
    for (std::size_t i = 0; i < data.rows; ++i) {
        CHECK(shuffled.assignments[i] == base.assignments[perm[i]]);
    }
}

TEST_CASE("k=1 centroid is the dataset mean for every measure") {
    std::mt19937_64 rng(41);
    const auto data = random_dataset(15, 2, 0.0, kPi, rng);
    std::vector<double> mean(2, 0.0);
    for (std::size_t i = 0; i < data.rows; ++i) {
        mean[0] += data.at(i, 0);
        mean[1] += data.at(i, 1);
    }
    mean[0] /= static_cast<double>(data.rows);
    mean[1] /= static_cast<double>(data.rows);

    for (auto measure : {DistanceMeasure::euclidean, DistanceMeasure::swap_test,
                         DistanceMeasure::quantum_kernel}) {
        KMeansConfig cfg;
        cfg.k = 1;
        cfg.seed = 7;
        cfg.measure = measure;
        const auto result = cluster::kmeans(data, cfg);
        CHECK(result.centroids.at(0, 0) == doctest::Approx(mean[0]).epsilon(1e-12));
        CHECK(result.centroids.at(0, 1) == doctest::Approx(mean[1]).epsilon(1e-12));
    }
}

TEST_CASE("elbow curve basics") {
    std::mt19937_64 rng(51);
    const auto data = random_dataset(12, 2, 0.0, 1.0, rng);
    KMeansConfig base;
    base.seed = 3;

    const auto trivial = cluster::elbow_curve(data, 12, 12, base, 3);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0].second == doctest::Approx(0.0));

    const auto curve = cluster::elbow_curve(data, 1, 8, base, 5);
    REQUIRE(curve.size() == 8);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve[i].second <= curve[i - 1].second + 1e-9);
    }

    CHECK_THROWS_AS(cluster::elbow_curve(data, 3, 2, base, 5), UsageError);
    CHECK_THROWS_AS(cluster::elbow_curve(data, 0, 2, base, 5), UsageError);
}

TEST_CASE("suggest_k maximizes the second difference") {
    const std::vector<std::pair<int, double>> curve = {
        {1, 100.0}, {2, 60.0}, {3, 30.0}, {4, 10.0}, {5, 8.0}, {6, 6.5}};
    // second differences at k=2..5: 10, 10, 18, 0.5 -> k=4
    CHECK(cluster::suggest_k(curve) == 4);

    const std::vector<std::pair<int, double>> single = {{3, 5.0}};
    CHECK(cluster::suggest_k(single) == 3);
}

TEST_CASE("spectral clustering separates two tight far pairs") {
    const auto data = Dataset::from_rows({{0, 0}, {0, 0.1}, {9, 9}, {9, 9.1}});
    cluster::SpectralConfig cfg;
    cfg.k = 2;
    cfg.seed = 1;
    cfg.restarts = 3;
    const auto result = cluster::spectral_cluster(data, cfg);
    const auto [best_labels, ignored] = brute::best_two_partition(data);
    CHECK(metrics::adjusted_rand_index(result.assignments, best_labels) == doctest::Approx(1.0));
}

TEST_CASE("normalized laplacian has a near-null constant-degree direction") {
    std::mt19937_64 rng(61);
    const auto data = random_dataset(12, 2, 0.0, 1.0, rng);
    cluster::SpectralConfig cfg;
    cfg.k = 2;
    // Rebuild the laplacian exactly as spectral_cluster does, then check its
    // smallest eigenvalue through the public eigensolver.
    // (The claim: lambda_min(L_sym) = 0 with eigenvector D^{1/2} * 1.)
    const std::size_t m = data.rows;
    cluster::Matrix affinity(m, m);
    double sigma = 0.0;
    {
        std::vector<double> dists;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                double d2 = 0;
                for (std::size_t c = 0; c < data.cols; ++c) {
                    const double diff = data.at(i, c) - data.at(j, c);
                    d2 += diff * diff;
                }
                dists.push_back(std::sqrt(d2));
            }
        }
        std::sort(dists.begin(), dists.end());
        sigma = dists[dists.size() / 2];
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            double d2 = 0;
            for (std::size_t c = 0; c < data.cols; ++c) {
                const double diff = data.at(i, c) - data.at(j, c);
                d2 += diff * diff;
            }
            affinity.at(i, j) = std::exp(-d2 / (2 * sigma * sigma));
        }
    }
    std::vector<double> degree(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) degree[i] += affinity.at(i, j);
    }
    cluster::Matrix lap(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double off = -affinity.at(i, j) / std::sqrt(degree[i] * degree[j]);
            lap.at(i, j) = (i == j) ? 1.0 + off : off;
        }
    }
    const auto eig = cluster::symmetric_eig(lap);
    CHECK(std::abs(eig.eigenvalues.front()) < 1e-8);

    // The eigenvector should be proportional to D^{1/2} 1.
    std::vector<double> expected(m);
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        expected[i] = std::sqrt(degree[i]);
        norm += expected[i] * expected[i];
    }
    norm = std::sqrt(norm);
    double dot = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        dot += (expected[i] / norm) * eig.eigenvectors.at(i, 0);
    }
    CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("concentric rings: spectral succeeds where euclidean kmeans fails") {
    Dataset rings(60, 2);
    std::vector<int> truth(60);
    for (int i = 0; i < 30; ++i) {
        const double t = 2.0 * kPi * i / 30.0;
        rings.at(i, 0) = std::cos(t);
        rings.at(i, 1) = std::sin(t);
        truth[i] = 0;
        rings.at(30 + i, 0) = 3.0 * std::cos(t);
        rings.at(30 + i, 1) = 3.0 * std::sin(t);
        truth[30 + i] = 1;
    }

    cluster::SpectralConfig sc;
    sc.k = 2;
    sc.sigma = 0.5;  // local scale; the global median blurs the ring gap
    sc.seed = 7;
    sc.restarts = 5;
    const auto spectral = cluster::spectral_cluster(rings, sc);
    CHECK(metrics::adjusted_rand_index(spectral.assignments, truth) >= 0.9);

    KMeansConfig kc;
    kc.k = 2;
    kc.seed = 7;
    double best_wcss = std::numeric_limits<double>::infinity();
    cluster::ClusteringResult best;
    for (int r = 0; r < 5; ++r) {
        kc.seed = 7 + r;
        auto res = cluster::kmeans(rings, kc);
        const double w = cluster::wcss(rings, res);
        if (w < best_wcss) {
            best_wcss = w;
            best = std::move(res);
        }
    }
    CHECK(metrics::adjusted_rand_index(best.assignments, truth) <= 0.5);
}

TEST_CASE("jacobi eigensolver") {
    // Identity: all eigenvalues are exactly 1.
    cluster::Matrix eye(4, 4);
    for (int i = 0; i < 4; ++i) eye.at(i, i) = 1.0;
    const auto id_eig = cluster::symmetric_eig(eye);
    for (double v : id_eig.eigenvalues) CHECK(v == doctest::Approx(1.0));

    // Diagonal matrices sort ascending.
    cluster::Matrix diag(3, 3);
    diag.at(0, 0) = 3.0;
    diag.at(1, 1) = 1.0;
    diag.at(2, 2) = 2.0;
    const auto d_eig = cluster::symmetric_eig(diag);
    CHECK(d_eig.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(d_eig.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(d_eig.eigenvalues[2] == doctest::Approx(3.0));

    // Random symmetric 20x20: A = V diag(lambda) V^T within 1e-7, V orthonormal.
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 20;
    cluster::Matrix a(n, n);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = u(rng);
            a.at(i, j) = v;
            a.at(j, i) = v;
            max_abs = std::max(max_abs, std::abs(v));
        }
    }
    const auto eig = cluster::symmetric_eig(a);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double recon = 0.0;
            for (std::size_t l = 0; l < n; ++l) {
                recon += eig.eigenvectors.at(i, l) * eig.eigenvalues[l] *
                         eig.eigenvectors.at(j, l);
            }
            CHECK(std::abs(recon - a.at(i, j)) < 1e-7 * std::max(1.0, max_abs));
        }
    }
    for (std::size_t c1 = 0; c1 < n; ++c1) {
        for (std::size_t c2 = c1; c2 < n; ++c2) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dot += eig.eigenvectors.at(i, c1) * eig.eigenvectors.at(i, c2);
            }
            CHECK(std::abs(dot - (c1 == c2 ? 1.0 : 0.0)) < 1e-8);
        }
    }

    // Eigenvalues ascending.
    for (std::size_t i = 1; i < n; ++i) {
        CHECK(eig.eigenvalues[i] >= eig.eigenvalues[i - 1]);
    }

    cluster::Matrix asym(2, 2);
    asym.at(0, 1) = 1.0;
    CHECK_THROWS_AS(cluster::symmetric_eig(asym), UsageError);
}
