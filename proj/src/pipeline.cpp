#include "qclust/pipeline.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qclust/io.hpp"
#include "qclust/svg.hpp"
#include "qclust/version.hpp"

namespace qclust::pipeline {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<Algorithm, 4> kTableOrder = {
    Algorithm::kmeans, Algorithm::spectral, Algorithm::qcswap_kmeans,
    Algorithm::qkernel_kmeans};

bool is_quantum(Algorithm a) {
    return a == Algorithm::qcswap_kmeans || a == Algorithm::qkernel_kmeans;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt_double(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

AlgorithmOutcome run_algorithm(Algorithm algo, const RunSpec& spec, const Dataset& data01,
                               const Dataset& data_pi,
                               const std::vector<ingest::VulnRecord>& records) {
    AlgorithmOutcome out;
    out.algorithm = algo;
    const auto t0 = std::chrono::steady_clock::now();

    if (algo == Algorithm::spectral) {
        cluster::SpectralConfig sc;
        sc.k = spec.k;
        sc.seed = spec.seed;
        sc.restarts = spec.restarts;
        out.result = cluster::spectral_cluster(data01, sc);
        out.objective = out.result.wcss_history.back();
        out.selection = "min_embedding_wcss";
        out.best_restart = -1;  // chosen inside spectral_cluster
        out.features = data01;
        out.normalization = "[0,1]";
    } else {
        const bool quantum = is_quantum(algo);
        const Dataset& features = quantum ? data_pi : data01;
        cluster::KMeansConfig kc;
        kc.k = spec.k;
        kc.measure = algo == Algorithm::kmeans ? cluster::DistanceMeasure::euclidean
                     : algo == Algorithm::qcswap_kmeans
                         ? cluster::DistanceMeasure::swap_test
                         : cluster::DistanceMeasure::quantum_kernel;
        kc.kernel_measurement = spec.kernel_measurement;

        bool have_best = false;
        double best_obj = 0.0;
        for (int r = 0; r < spec.restarts; ++r) {
            kc.seed = spec.seed + static_cast<std::uint64_t>(r);
            kc.fidelity_mode = spec.shots
                                   ? encode::FidelityMode::Sampled(*spec.shots, kc.seed)
                                   : encode::FidelityMode::Exact();
            auto result = cluster::kmeans(features, kc);
            const double obj =
                quantum ? result.fidelity_history.back() : result.wcss_history.back();
            const bool better = !have_best || (quantum ? obj > best_obj : obj < best_obj);
            if (better) {
                have_best = true;
                best_obj = obj;
                out.result = std::move(result);
                out.best_restart = r;
            }
        }
        out.objective = best_obj;
        out.selection = quantum ? "max_total_fidelity" : "min_wcss";
        out.features = features;
        out.normalization = quantum ? "[0,pi]" : "[0,1]";
    }

    try {
        out.metrics = metrics::compute_report(out.features, out.result.assignments);
    } catch (const MetricUndefinedError& e) {
        out.metric_note = e.what();
    }
    out.profiles = ingest::cluster_profile(records, out.result.assignments, spec.k);

    const auto t1 = std::chrono::steady_clock::now();
    out.duration_seconds = std::chrono::duration<double>(t1 - t0).count();
    return out;
}

ordered_json profiles_json(const std::vector<ingest::ClusterProfile>& profiles) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : profiles) {
        ordered_json top_vendors = ordered_json::array();
        for (std::size_t i = 0; i < p.top_vendors.size() && i < 10; ++i) {
            top_vendors.push_back({p.top_vendors[i].first, p.top_vendors[i].second});
        }
        ordered_json top_products = ordered_json::array();
        for (std::size_t i = 0; i < p.top_products.size() && i < 10; ++i) {
            top_products.push_back({p.top_products[i].first, p.top_products[i].second});
        }
        ordered_json severity = ordered_json::object();
        for (const auto& [label, count] : p.severity_histogram) {
            severity[label.empty() ? "(blank)" : label] = count;
        }
        arr.push_back({{"cluster", p.cluster_id},
                       {"size", p.size},
                       {"top_vendors", top_vendors},
                       {"top_products", top_products},
                       {"severity", severity}});
    }
    return arr;
}

}  // namespace

const char* algorithm_id(Algorithm a) {
    switch (a) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::spectral: return "spectral";
        case Algorithm::qcswap_kmeans: return "qcswap_kmeans";
        case Algorithm::qkernel_kmeans: return "qkernel_kmeans";
    }
    return "?";
}

const char* algorithm_display_name(Algorithm a) {
    switch (a) {
        case Algorithm::kmeans: return "K-means";
        case Algorithm::spectral: return "Spectral Clustering";
        case Algorithm::qcswap_kmeans: return "QCSWAPK-means";
        case Algorithm::qkernel_kmeans: return "QkernelK-means";
    }
    return "?";
}

std::vector<Algorithm> parse_algorithms(const std::string& text) {
    if (text == "all") {
        return {kTableOrder.begin(), kTableOrder.end()};
    }
    for (Algorithm a : kTableOrder) {
        if (text == algorithm_id(a)) return {a};
    }
    throw UsageError("unknown algorithm '" + text +
                     "' (expected kmeans, spectral, qcswap_kmeans, qkernel_kmeans or all)");
}

RunReport run(const RunSpec& spec) {
    if (spec.k < 1) throw ConfigError("k must be at least 1");
    if (spec.restarts < 1) throw ConfigError("restarts must be at least 1");
    if (spec.shots && *spec.shots < 1) throw ConfigError("shots must be at least 1");
    const auto algorithms = parse_algorithms(spec.algorithm);

    const auto parsed = ingest::parse_kev_csv(spec.input);
    const auto records = ingest::filter_year(parsed.records, spec.year_filter);
    if (records.empty()) {
        throw DataError("no records with date_added in " + std::to_string(spec.year_filter));
    }

    constexpr ingest::FeatureColumn kColumns[] = {ingest::FeatureColumn::vendor_project,
                                                  ingest::FeatureColumn::product};
    const auto encoded = ingest::label_encode(records, kColumns);
    const Dataset data01 = ingest::min_max_normalize(encoded.data, {0.0, 1.0});
    const Dataset data_pi = ingest::min_max_normalize(encoded.data, {0.0, std::numbers::pi});

    RunReport report;
    report.spec = spec;
    report.dataset.rows_total = parsed.data_rows;
    report.dataset.rejects = parsed.rejects.size();
    report.dataset.rows_after_filter = records.size();
    report.dataset.vendors = encoded.encodings[0].categories.size();
    report.dataset.products = encoded.encodings[1].categories.size();

    for (Algorithm algo : algorithms) {
        report.outcomes.push_back(run_algorithm(algo, spec, data01, data_pi, records));
    }
    return report;
}

std::string report_json(const RunReport& report) {
    ordered_json root;
    root["tool"] = {{"name", "qclust"}, {"version", kVersion}};
    root["generated_at"] = timestamp_utc();
    root["config"] = {{"input", report.spec.input.string()},
                      {"algorithm", report.spec.algorithm},
                      {"k", report.spec.k},
                      {"seed", report.spec.seed},
                      {"restarts", report.spec.restarts},
                      {"shots", report.spec.shots ? ordered_json(*report.spec.shots)
                                                  : ordered_json(nullptr)},
                      {"year_filter", report.spec.year_filter},
                      {"kernel_measurement",
                       report.spec.kernel_measurement == encode::KernelMeasurement::all_zeros
                           ? "all_zeros"
                           : "first_qubit"}};
    root["dataset"] = {{"rows_total", report.dataset.rows_total},
                       {"rejects", report.dataset.rejects},
                       {"rows_after_filter", report.dataset.rows_after_filter},
                       {"vendors", report.dataset.vendors},
                       {"products", report.dataset.products}};

    ordered_json algos = ordered_json::object();
    for (const auto& out : report.outcomes) {
        ordered_json a;
        a["normalization"] = out.normalization;
        a["selection"] = out.selection;
        a["best_restart"] =
            out.best_restart >= 0 ? ordered_json(out.best_restart) : ordered_json(nullptr);
        a["objective"] = out.objective;
        a["iterations"] = out.result.iterations;
        a["converged"] = out.result.converged;
        if (out.metrics) {
            a["metrics"] = {{"silhouette", out.metrics->silhouette},
                            {"davies_bouldin", out.metrics->davies_bouldin},
                            {"calinski_harabasz", out.metrics->calinski_harabasz}};
        } else {
            a["metrics"] = nullptr;
            a["metric_note"] = out.metric_note;
        }
        std::vector<std::size_t> sizes(report.spec.k, 0);
        for (int v : out.result.assignments) ++sizes[v];
        a["cluster_sizes"] = sizes;
        ordered_json centroids = ordered_json::array();
        for (std::size_t c = 0; c < out.result.centroids.rows; ++c) {
            ordered_json row = ordered_json::array();
            for (double v : out.result.centroids.row(c)) row.push_back(v);
            centroids.push_back(row);
        }
        a["centroids"] = centroids;
        a["assignments"] = out.result.assignments;
        a["profiles"] = profiles_json(out.profiles);
        algos[algorithm_id(out.algorithm)] = a;
    }
    root["algorithms"] = algos;
    return root.dump(2) + "\n";
}

namespace {

std::string metrics_csv(const RunReport& report) {
    std::ostringstream out;
    out << "algorithm,silhouette,davies_bouldin,calinski_harabasz\n";
    for (const auto& o : report.outcomes) {
        out << algorithm_id(o.algorithm) << ",";
        if (o.metrics) {
            out << fmt_double(o.metrics->silhouette) << "," << fmt_double(o.metrics->davies_bouldin)
                << "," << fmt_double(o.metrics->calinski_harabasz);
        } else {
            out << ",,";
        }
        out << "\n";
    }
    return out.str();
}

std::string profiles_md(const RunReport& report) {
    std::ostringstream out;
    out << "# Cluster profiles\n";
    for (const auto& o : report.outcomes) {
        out << "\n## " << algorithm_display_name(o.algorithm) << "\n";
        for (const auto& p : o.profiles) {
            out << "\n### Cluster " << p.cluster_id << " (size " << p.size << ")\n\n";
            out << "- top vendors:";
            for (std::size_t i = 0; i < p.top_vendors.size() && i < 5; ++i) {
                out << (i ? "," : "") << " " << p.top_vendors[i].first << " ("
                    << p.top_vendors[i].second << ")";
            }
            out << "\n- top products:";
            for (std::size_t i = 0; i < p.top_products.size() && i < 5; ++i) {
                out << (i ? "," : "") << " " << p.top_products[i].first << " ("
                    << p.top_products[i].second << ")";
            }
            out << "\n- severity:";
            bool first = true;
            for (const auto& [label, count] : p.severity_histogram) {
                out << (first ? "" : ",") << " " << (label.empty() ? "(blank)" : label) << ": "
                    << count;
                first = false;
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace

void write_run_outputs(const RunReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    io::atomic_write(out_dir / "report.json", report_json(report));
    io::atomic_write(out_dir / "metrics.csv", metrics_csv(report));
    io::atomic_write(out_dir / "profiles.md", profiles_md(report));
    for (const auto& o : report.outcomes) {
        const std::string title = std::string(algorithm_display_name(o.algorithm)) +
                                  " (k=" + std::to_string(report.spec.k) + ", " +
                                  o.normalization + ")";
        const auto image = svg::scatter_plot(o.features, o.result.assignments,
                                             o.result.centroids, title, "Vendor/Project",
                                             "Product");
        io::atomic_write(out_dir / ("scatter_" + std::string(algorithm_id(o.algorithm)) + ".svg"),
                         image);
    }
}

ElbowResult elbow(const RunSpec& spec, int k_min, int k_max) {
    if (spec.restarts < 1) throw ConfigError("restarts must be at least 1");
    const auto parsed = ingest::parse_kev_csv(spec.input);
    const auto records = ingest::filter_year(parsed.records, spec.year_filter);
    if (records.empty()) {
        throw DataError("no records with date_added in " + std::to_string(spec.year_filter));
    }
    constexpr ingest::FeatureColumn kColumns[] = {ingest::FeatureColumn::vendor_project,
                                                  ingest::FeatureColumn::product};
    const auto encoded = ingest::label_encode(records, kColumns);

    cluster::KMeansConfig base;
    base.seed = spec.seed;
    Dataset features;
    if (spec.algorithm == "qcswap_kmeans" || spec.algorithm == "qkernel_kmeans") {
        base.measure = spec.algorithm == "qcswap_kmeans"
                           ? cluster::DistanceMeasure::swap_test
                           : cluster::DistanceMeasure::quantum_kernel;
        base.kernel_measurement = spec.kernel_measurement;
        if (spec.shots) base.fidelity_mode = encode::FidelityMode::Sampled(*spec.shots, spec.seed);
        features = ingest::min_max_normalize(encoded.data, {0.0, std::numbers::pi});
    } else {
        features = ingest::min_max_normalize(encoded.data, {0.0, 1.0});
    }

    ElbowResult result;
    result.curve = cluster::elbow_curve(features, k_min, k_max, base, spec.restarts);
    result.suggested_k = cluster::suggest_k(result.curve);
    return result;
}

void write_elbow_outputs(const ElbowResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv;
    csv << "k,wcss\n";
    for (const auto& [k, w] : result.curve) {
        csv << k << "," << fmt_double(w, "%.9f") << "\n";
    }
    io::atomic_write(out_dir / "elbow.csv", csv.str());
    io::atomic_write(out_dir / "elbow.svg",
                     svg::line_plot(result.curve, "Elbow curve", "k", "WCSS"));
}

std::string comparison_table(const RunReport& report) {
    // Best per column: max silhouette, min Davies-Bouldin, max Calinski-Harabasz.
    double best_sil = -std::numeric_limits<double>::infinity();
    double best_db = std::numeric_limits<double>::infinity();
    double best_ch = -std::numeric_limits<double>::infinity();
    for (const auto& o : report.outcomes) {
        if (!o.metrics) continue;
        best_sil = std::max(best_sil, o.metrics->silhouette);
        best_db = std::min(best_db, o.metrics->davies_bouldin);
        best_ch = std::max(best_ch, o.metrics->calinski_harabasz);
    }
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-20s %14s %16s %19s\n", "Algorithm", "Silhouette",
                  "Davies-Bouldin", "Calinski-Harabasz");
    out << line;
    out << std::string(72, '-') << "\n";
    for (const auto& o : report.outcomes) {
        if (o.metrics) {
            auto cell = [](double v, bool best) {
                return fmt_double(v, "%.3f") + (best ? "*" : " ");
            };
            std::snprintf(line, sizeof(line), "%-20s %14s %16s %19s\n",
                          algorithm_display_name(o.algorithm),
                          cell(o.metrics->silhouette, o.metrics->silhouette == best_sil).c_str(),
                          cell(o.metrics->davies_bouldin, o.metrics->davies_bouldin == best_db)
                              .c_str(),
                          cell(o.metrics->calinski_harabasz,
                               o.metrics->calinski_harabasz == best_ch)
                              .c_str());
        } else {
            std::snprintf(line, sizeof(line), "%-20s %14s %16s %19s\n",
                          algorithm_display_name(o.algorithm), "n/a", "n/a", "n/a");
        }
        out << line;
    }
    return out.str();
}

void write_compare_outputs(const RunReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    double best_sil = -std::numeric_limits<double>::infinity();
    double best_db = std::numeric_limits<double>::infinity();
    double best_ch = -std::numeric_limits<double>::infinity();
    for (const auto& o : report.outcomes) {
        if (!o.metrics) continue;
        best_sil = std::max(best_sil, o.metrics->silhouette);
        best_db = std::min(best_db, o.metrics->davies_bouldin);
        best_ch = std::max(best_ch, o.metrics->calinski_harabasz);
    }
    std::ostringstream csv;
    csv << "algorithm,silhouette,davies_bouldin,calinski_harabasz,"
           "best_silhouette,best_davies_bouldin,best_calinski_harabasz\n";
    for (const auto& o : report.outcomes) {
        csv << algorithm_id(o.algorithm) << ",";
        if (o.metrics) {
            csv << fmt_double(o.metrics->silhouette) << ","
                << fmt_double(o.metrics->davies_bouldin) << ","
                << fmt_double(o.metrics->calinski_harabasz) << ","
                << (o.metrics->silhouette == best_sil ? 1 : 0) << ","
                << (o.metrics->davies_bouldin == best_db ? 1 : 0) << ","
                << (o.metrics->calinski_harabasz == best_ch ? 1 : 0);
        } else {
            csv << ",,,,,";
        }
        csv << "\n";
    }
    io::atomic_write(out_dir / "comparison.csv", csv.str());
    io::atomic_write(out_dir / "comparison.txt", comparison_table(report));
}

}  // namespace qclust::pipeline
