#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qclust/cluster.hpp"
#include "qclust/ingest.hpp"
#include "qclust/metrics.hpp"

// End-to-end orchestration behind the CLI subcommands: ingest -> encode ->
// normalize -> cluster (best of restarts) -> metrics -> profiles -> files.
// Classical algorithms cluster the [0,1]-normalized features, quantum ones
// the [0,pi]-normalized features; metrics are computed on the features each
// algorithm consumed.

namespace qclust::pipeline {

enum class Algorithm { kmeans, spectral, qcswap_kmeans, qkernel_kmeans };

const char* algorithm_id(Algorithm a);            // CLI identifier
const char* algorithm_display_name(Algorithm a);  // table label

/// Accepts an algorithm id or "all" (comparison-table row order).
std::vector<Algorithm> parse_algorithms(const std::string& text);

struct RunSpec {
    std::filesystem::path input;
    std::string algorithm = "all";
    int k = 4;
    std::uint64_t seed = 42;
    int restarts = 10;
    std::optional<std::uint64_t> shots;  // absent = exact fidelity
    int year_filter = 2022;
    std::filesystem::path output_dir = "out";
    encode::KernelMeasurement kernel_measurement = encode::KernelMeasurement::all_zeros;
};

struct DatasetSummary {
    std::size_t rows_total = 0;      // data rows in the file
    std::size_t rejects = 0;
    std::size_t rows_after_filter = 0;
    std::size_t vendors = 0;
    std::size_t products = 0;
};

struct AlgorithmOutcome {
    Algorithm algorithm = Algorithm::kmeans;
    cluster::ClusteringResult result;
    std::optional<metrics::MetricReport> metrics;  // absent when undefined
    std::string metric_note;                       // reason when absent
    std::vector<ingest::ClusterProfile> profiles;
    double objective = 0.0;  // selection value: WCSS (min) or total fidelity (max)
    const char* selection = "";
    int best_restart = 0;
    double duration_seconds = 0.0;
    Dataset features;  // the normalized features this algorithm clustered
    const char* normalization = "";
};

struct RunReport {
    RunSpec spec;
    DatasetSummary dataset;
    std::vector<AlgorithmOutcome> outcomes;
};

/// Executes the selected algorithms. Throws on ingestion/config errors
/// before any file is written.
RunReport run(const RunSpec& spec);

/// report.json (volatile fields confined to "generated_at"), metrics.csv,
/// profiles.md and scatter_<algo>.svg, each written atomically.
void write_run_outputs(const RunReport& report, const std::filesystem::path& out_dir);

/// Serialized report, exposed for the determinism tests.
std::string report_json(const RunReport& report);

struct ElbowResult {
    std::vector<std::pair<int, double>> curve;
    int suggested_k = 0;
};

/// Best-of-restarts WCSS per k. Uses euclidean K-means unless the spec names
/// a single quantum algorithm.
ElbowResult elbow(const RunSpec& spec, int k_min, int k_max);

void write_elbow_outputs(const ElbowResult& result, const std::filesystem::path& out_dir);

/// Fixed-width comparison table, one row per algorithm in Table order; the
/// best value in each metric column is flagged with '*' (ties all flagged).
std::string comparison_table(const RunReport& report);

void write_compare_outputs(const RunReport& report, const std::filesystem::path& out_dir);

}  // namespace qclust::pipeline
