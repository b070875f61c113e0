#include "qclust/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

#include "qclust/kernels.hpp"

namespace qclust::cluster {

namespace {

std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Dataset take_rows(const Dataset& data, std::span<const std::size_t> idx) {
    Dataset out(idx.size(), data.cols);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto src = data.row(idx[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

// "k centroids are selected randomly from the dataset": k distinct rows.
Dataset init_random_rows(const Dataset& data, int k, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(data.rows);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (int i = 0; i < k; ++i) {
        const std::size_t j = i + bounded(rng, data.rows - i);
        std::swap(idx[i], idx[j]);
    }
    return take_rows(data, std::span(idx).first(k));
}

Dataset init_kmeans_plus_plus(const Dataset& data, int k, std::mt19937_64& rng) {
    std::vector<std::size_t> chosen;
    chosen.push_back(bounded(rng, data.rows));
    std::vector<double> d2(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) {
        d2[i] = kernels::sq_dist(data.row(i).data(), data.row(chosen[0]).data(), data.cols);
    }
    while (chosen.size() < static_cast<std::size_t>(k)) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0.0) {
            const double r = u01(rng) * total;
            double acc = 0.0;
            pick = data.rows - 1;
            for (std::size_t i = 0; i < data.rows; ++i) {
                acc += d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = bounded(rng, data.rows);  // all residuals zero: duplicates
        }
        chosen.push_back(pick);
        for (std::size_t i = 0; i < data.rows; ++i) {
            d2[i] = std::min(d2[i], kernels::sq_dist(data.row(i).data(),
                                                     data.row(pick).data(), data.cols));
        }
    }
    return take_rows(data, chosen);
}

double compute_wcss(const Dataset& data, const std::vector<int>& assignments,
                    const Dataset& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) {
        total += kernels::sq_dist(data.row(i).data(),
                                  centroids.row(assignments[i]).data(), data.cols);
    }
    return total;
}

double total_similarity(const Dataset& data, const std::vector<int>& assignments,
                        const Dataset& centroids, const detail::SimilarityFn& similarity) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) {
        total += similarity(data.row(i), centroids.row(assignments[i]));
    }
    return total;
}

double max_centroid_shift(const Dataset& before, const Dataset& after) {
    double worst = 0.0;
    for (std::size_t i = 0; i < before.rows; ++i) {
        const double d2 = kernels::sq_dist(before.row(i).data(), after.row(i).data(),
                                           before.cols);
        worst = std::max(worst, std::sqrt(d2));
    }
    return worst;
}

std::vector<int> assign_with(const Dataset& data, const Dataset& centroids,
                             const detail::SimilarityFn& similarity,
                             std::vector<double>* best_sim_out) {
    std::vector<int> assignments(data.rows, 0);
    if (best_sim_out) best_sim_out->assign(data.rows, 0.0);
    for (std::size_t i = 0; i < data.rows; ++i) {
        const auto row = data.row(i);
        int best = 0;
        double best_sim = similarity(row, centroids.row(0));
        for (std::size_t c = 1; c < centroids.rows; ++c) {
            const double sim = similarity(row, centroids.row(c));
            if (sim > best_sim) {  // ties keep the lowest cluster index
                best_sim = sim;
                best = static_cast<int>(c);
            }
        }
        assignments[i] = best;
        if (best_sim_out) (*best_sim_out)[i] = best_sim;
    }
    return assignments;
}

// Reassigns the globally worst-fitted point to each empty cluster so k never
// collapses. Deterministic: clusters are handled in ascending index order.
void reseed_empty_clusters(std::vector<int>& assignments, std::vector<double>& best_sim,
                           int k) {
    std::vector<std::size_t> sizes(k, 0);
    for (int a : assignments) ++sizes[a];
    for (int c = 0; c < k; ++c) {
        if (sizes[c] != 0) continue;
        std::size_t worst = 0;
        double worst_sim = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (sizes[assignments[i]] <= 1) continue;  // don't empty another cluster
            if (best_sim[i] < worst_sim) {
                worst_sim = best_sim[i];
                worst = i;
            }
        }
        --sizes[assignments[worst]];
        assignments[worst] = c;
        sizes[c] = 1;
        best_sim[worst] = std::numeric_limits<double>::infinity();  // claim once
    }
}

}  // namespace

namespace detail {

SimilarityFn make_similarity(DistanceMeasure measure, const encode::FidelityMode& mode,
                             encode::KernelMeasurement measurement) {
    switch (measure) {
        case DistanceMeasure::euclidean:
            return [](std::span<const double> x, std::span<const double> c) {
                return -kernels::sq_dist(x.data(), c.data(), x.size());
            };
        case DistanceMeasure::swap_test:
            return [mode](std::span<const double> x, std::span<const double> c) {
                return encode::swap_test_fidelity(encode::AngleVector::from_span(x),
                                                  encode::AngleVector::from_span(c), mode);
            };
        case DistanceMeasure::quantum_kernel:
            return [mode, measurement](std::span<const double> x, std::span<const double> c) {
                return encode::kernel_fidelity(encode::AngleVector::from_span(x),
                                               encode::AngleVector::from_span(c), mode,
                                               measurement);
            };
    }
    throw UsageError("unknown distance measure");
}

ClusteringResult kmeans_with_similarity(const Dataset& data, const KMeansConfig& config,
                                        const SimilarityFn& similarity,
                                        bool record_fidelity) {
    if (data.rows == 0 || data.cols == 0) throw DataError("cannot cluster an empty dataset");
    data.check_finite();
    if (config.k < 1) throw ConfigError("k must be at least 1");
    if (static_cast<std::size_t>(config.k) > data.rows) {
        throw ConfigError("k (" + std::to_string(config.k) + ") exceeds dataset size (" +
                          std::to_string(data.rows) + ")");
    }
    if (!(config.tol > 0.0)) throw ConfigError("tol must be positive");
    if (config.max_iter < 1) throw ConfigError("max_iter must be at least 1");

    std::mt19937_64 rng(config.seed);
    Dataset centroids;
    if (config.initial_centroids) {
        const Dataset& init = *config.initial_centroids;
        if (init.rows != static_cast<std::size_t>(config.k) || init.cols != data.cols) {
            throw ConfigError("initial centroids must be k x N");
        }
        centroids = init;
    } else if (config.kmeans_plus_plus) {
        centroids = init_kmeans_plus_plus(data, config.k, rng);
    } else {
        centroids = init_random_rows(data, config.k, rng);
    }

    ClusteringResult result;
    std::vector<int> prev_assignments;
    std::vector<double> best_sim;
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        auto assignments = assign_with(data, centroids, similarity, &best_sim);
        reseed_empty_clusters(assignments, best_sim, config.k);
        Dataset updated = update_step(data, assignments, config.k);
        const double shift = max_centroid_shift(centroids, updated);
        centroids = std::move(updated);

        result.iterations = iter;
        result.wcss_history.push_back(compute_wcss(data, assignments, centroids));
        if (record_fidelity) {
            result.fidelity_history.push_back(
                total_similarity(data, assignments, centroids, similarity));
        }
        const bool unchanged = !prev_assignments.empty() && assignments == prev_assignments;
        prev_assignments = std::move(assignments);
        if (unchanged || shift < config.tol) {
            result.converged = true;
            break;
        }
    }
    result.assignments = std::move(prev_assignments);
    result.centroids = std::move(centroids);
    return result;
}

}  // namespace detail

ClusteringResult kmeans(const Dataset& data, const KMeansConfig& config) {
    const auto similarity = detail::make_similarity(config.measure, config.fidelity_mode,
                                                    config.kernel_measurement);
    return detail::kmeans_with_similarity(data, config, similarity,
                                          config.measure != DistanceMeasure::euclidean);
}

std::vector<int> assign_step(const Dataset& data, const Dataset& centroids,
                             DistanceMeasure measure, const encode::FidelityMode& mode,
                             encode::KernelMeasurement measurement) {
    if (data.cols != centroids.cols) throw UsageError("centroid dimension mismatch");
    if (centroids.rows == 0) throw UsageError("no centroids");
    const auto similarity = detail::make_similarity(measure, mode, measurement);
    return assign_with(data, centroids, similarity, nullptr);
}

Dataset update_step(const Dataset& data, const std::vector<int>& assignments, int k) {
    if (assignments.size() != data.rows) throw UsageError("assignment length mismatch");
    Dataset centroids(k, data.cols);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.rows; ++i) {
        const int a = assignments[i];
        if (a < 0 || a >= k) throw UsageError("assignment value out of range");
        ++counts[a];
        const auto row = data.row(i);
        for (std::size_t j = 0; j < data.cols; ++j) centroids.at(a, j) += row[j];
    }
    for (int c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            throw UsageError("cluster " + std::to_string(c) + " is empty");
        }
        for (std::size_t j = 0; j < data.cols; ++j) {
            centroids.at(c, j) /= static_cast<double>(counts[c]);
        }
    }
    return centroids;
}

double wcss(const Dataset& data, const ClusteringResult& result) {
    return compute_wcss(data, result.assignments, result.centroids);
}

std::vector<std::pair<int, double>> elbow_curve(const Dataset& data, int k_min, int k_max,
                                                const KMeansConfig& base_config,
                                                int n_restarts) {
    if (k_min < 1 || k_min > k_max || static_cast<std::size_t>(k_max) > data.rows) {
        throw UsageError("invalid elbow range [" + std::to_string(k_min) + ", " +
                         std::to_string(k_max) + "]");
    }
    if (n_restarts < 1) throw UsageError("elbow needs at least one restart");
    std::vector<std::pair<int, double>> curve;
    for (int k = k_min; k <= k_max; ++k) {
        KMeansConfig cfg = base_config;
        cfg.k = k;
        cfg.initial_centroids.reset();
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < n_restarts; ++r) {
            cfg.seed = base_config.seed + static_cast<std::uint64_t>(r);
            const auto result = kmeans(data, cfg);
            best = std::min(best, wcss(data, result));
        }
        curve.emplace_back(k, best);
    }
    return curve;
}

int suggest_k(std::span<const std::pair<int, double>> curve) {
    if (curve.empty()) throw UsageError("empty elbow curve");
    if (curve.size() < 3) return curve.front().first;
    int best_k = curve[1].first;
    double best_d2 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const double d2 = curve[i - 1].second - 2.0 * curve[i].second + curve[i + 1].second;
        if (d2 > best_d2) {
            best_d2 = d2;
            best_k = curve[i].first;
        }
    }
    return best_k;
}

namespace {

// Upper median of the pairwise Euclidean distances.
double median_pairwise_distance(const Dataset& data) {
    const std::size_t m = data.rows;
    if (m < 2) return 1.0;
    std::vector<double> d2;
    d2.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            d2.push_back(kernels::sq_dist(data.row(i).data(), data.row(j).data(), data.cols));
        }
    }
    auto mid = d2.begin() + static_cast<std::ptrdiff_t>(d2.size() / 2);
    std::nth_element(d2.begin(), mid, d2.end());
    return std::sqrt(*mid);
}

}  // namespace

ClusteringResult spectral_cluster(const Dataset& data, const SpectralConfig& config) {
    if (data.rows == 0 || data.cols == 0) throw DataError("cannot cluster an empty dataset");
    data.check_finite();
    if (config.k < 1) throw ConfigError("k must be at least 1");
    if (static_cast<std::size_t>(config.k) > data.rows) {
        throw ConfigError("k exceeds dataset size");
    }
    if (config.restarts < 1) throw ConfigError("restarts must be at least 1");

    const std::size_t m = data.rows;
    double sigma = config.sigma;
    if (!(sigma > 0.0)) {
        sigma = median_pairwise_distance(data);
        if (!(sigma > 0.0)) {
            std::cerr << "qclust: warning: degenerate pairwise distances, sigma set to 1\n";
            sigma = 1.0;
        }
    }

    // Gaussian affinity with an empty diagonal.
    Matrix affinity(m, m);
    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d2 = kernels::sq_dist(data.row(i).data(), data.row(j).data(),
                                               data.cols);
            const double a = std::exp(-d2 * inv_two_sigma_sq);
            affinity.at(i, j) = a;
            affinity.at(j, i) = a;
        }
    }

    std::vector<double> degree(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double d = 0.0;
        const auto row = affinity.row(i);
        for (std::size_t j = 0; j < m; ++j) d += row[j];
        degree[i] = d;
    }

    constexpr double kDegreeFloor = 1e-12;
    Matrix laplacian(m, m);
    if (config.laplacian == SpectralConfig::Laplacian::normalized_symmetric) {
        std::size_t floored = 0;
        std::vector<double> inv_sqrt_deg(m);
        for (std::size_t i = 0; i < m; ++i) {
            double d = degree[i];
            if (d < kDegreeFloor) {
                d = kDegreeFloor;
                ++floored;
            }
            inv_sqrt_deg[i] = 1.0 / std::sqrt(d);
        }
        if (floored > 0) {
            std::cerr << "qclust: warning: " << floored
                      << " isolated vertex degree(s) floored at 1e-12\n";
        }
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double off = -affinity.at(i, j) * inv_sqrt_deg[i] * inv_sqrt_deg[j];
                laplacian.at(i, j) = (i == j) ? 1.0 + off : off;
            }
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                laplacian.at(i, j) = (i == j) ? degree[i] - affinity.at(i, j)
                                              : -affinity.at(i, j);
            }
        }
    }

    const EigResult eig = symmetric_eig(laplacian);

    // Embed on the k smallest eigenvectors and normalize the rows.
    Dataset embedding(m, config.k);
    for (std::size_t i = 0; i < m; ++i) {
        for (int j = 0; j < config.k; ++j) {
            embedding.at(i, j) = eig.eigenvectors.at(i, j);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        auto row = embedding.row(i);
        double norm = 0.0;
        for (double v : row) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 1e-300) {
            for (double& v : row) v /= norm;
        }
    }

    KMeansConfig kc;
    kc.k = config.k;
    kc.measure = DistanceMeasure::euclidean;
    ClusteringResult best;
    double best_wcss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
        kc.seed = config.seed + static_cast<std::uint64_t>(r);
        auto result = kmeans(embedding, kc);
        const double w = wcss(embedding, result);
        if (w < best_wcss) {
            best_wcss = w;
            best = std::move(result);
        }
    }
    return best;
}

EigResult symmetric_eig(const Matrix& input) {
    if (input.rows != input.cols || input.rows == 0) {
        throw UsageError("symmetric_eig requires a non-empty square matrix");
    }
    const std::size_t n = input.rows;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(input.at(i, j) - input.at(j, i)) > 1e-9) {
                throw UsageError("matrix is not symmetric within 1e-9");
            }
        }
    }

    std::vector<double> a = input.values;
    std::vector<double> vt(n * n, 0.0);  // rows are transposed eigenvectors
    for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

    double fro_sq = 0.0;
    for (double v : a) fro_sq += v * v;
    const double off_target = 1e-11 * std::sqrt(fro_sq) + 1e-300;

    constexpr int kMaxSweeps = 60;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) off_sq += a[i * n + j] * a[i * n + j];
        }
        if (std::sqrt(2.0 * off_sq) <= off_target) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 1.0 / (2.0 * tau);
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Rotate rows p and q; the 2x2 pivot block is then set in
                // closed form and mirrored onto the columns by symmetry.
                kernels::rotate_pair(&a[p * n], &a[q * n], n, c, s);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    a[i * n + p] = a[p * n + i];
                    a[i * n + q] = a[q * n + i];
                }
                kernels::rotate_pair(&vt[p * n], &vt[q * n], n, c, s);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&a, n](std::size_t x, std::size_t y) {
        return a[x * n + x] < a[y * n + y];
    });

    EigResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a[order[j] * n + order[j]];
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors.at(i, j) = vt[order[j] * n + i];
        }
    }
    return out;
}

}  // namespace qclust::cluster
