#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qclust/dataset.hpp"

// CISA KEV catalog ingestion: CSV parsing with a rejects list, year
// filtering, label encoding of the vendor/product columns, min-max
// normalization, and per-cluster composition profiles.

namespace qclust::ingest {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    /// Parses strict ISO "YYYY-MM-DD"; rejects impossible calendar dates.
    static std::optional<Date> parse(const std::string& text);
    std::string to_string() const;
    auto operator<=>(const Date&) const = default;
};

struct VulnRecord {
    std::string cve_id;
    std::string vendor_project;
    std::string product;
    std::string vulnerability_name;
    Date date_added;
    std::string short_description;
    std::string required_action;
    std::optional<Date> due_date;
    std::optional<double> cvss_score;  // in [0, 10] when present
    std::string cwe;
    std::string attack_vector;
    std::string complexity;
    std::string severity;
};

struct RejectedRow {
    std::size_t line_no = 0;  // 1-based physical line where the row starts
    std::string reason;
};

struct ParseResult {
    std::vector<VulnRecord> records;
    std::vector<RejectedRow> rejects;
    std::size_t data_rows = 0;  // records + rejects
};

/// Header-name-based CSV ingestion (column order free; names matched
/// case-insensitively after trimming, separators ignored). Rows with
/// unparseable mandatory fields (cve_id, vendor, product, date_added) land in
/// the rejects list with their line numbers. Throws DataError if the file or
/// a mandatory column is missing.
ParseResult parse_kev_csv(const std::filesystem::path& path);

/// Keeps records whose date_added falls in the given calendar year.
std::vector<VulnRecord> filter_year(const std::vector<VulnRecord>& records, int year);

/// Deterministic category -> integer code mapping (lexicographic byte order).
struct LabelEncoding {
    std::string column;
    std::vector<std::string> categories;  // sorted ascending

    std::size_t code_of(const std::string& category) const;
    const std::string& category_of(std::size_t code) const;
};

enum class FeatureColumn { vendor_project, product };

struct EncodedData {
    Dataset data;  // M x |columns|, integer-valued codes
    std::vector<LabelEncoding> encodings;
};

EncodedData label_encode(const std::vector<VulnRecord>& records,
                         std::span<const FeatureColumn> columns);

struct NormalizationRange {
    double lo = 0.0;
    double hi = 1.0;
};

/// Per-column affine map of [min, max] onto [lo, hi]; a constant column maps
/// to lo (with a warning).
Dataset min_max_normalize(const Dataset& data, const NormalizationRange& range);

struct ClusterProfile {
    int cluster_id = 0;
    std::size_t size = 0;
    std::vector<std::pair<std::string, std::size_t>> top_vendors;   // count desc, ties lexicographic
    std::vector<std::pair<std::string, std::size_t>> top_products;
    std::map<std::string, std::size_t> severity_histogram;
};

std::vector<ClusterProfile> cluster_profile(const std::vector<VulnRecord>& records,
                                            const std::vector<int>& assignments, int k);

}  // namespace qclust::ingest
