#include "qclust/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

namespace qclust::ingest {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Lowercases and drops separators so "cveID", "CVE_ID" and "cve id" agree.
std::string normalize_header(const std::string& h) {
    std::string out;
    for (char ch : h) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

// Canonical field names for the headers seen across KEV exports.
const std::unordered_map<std::string, std::string>& header_aliases() {
    static const std::unordered_map<std::string, std::string> aliases = {
        {"cveid", "cve_id"},
        {"vendorproject", "vendor_project"},
        {"vendor", "vendor_project"},
        {"product", "product"},
        {"productname", "product"},
        {"vulnerabilityname", "vulnerability_name"},
        {"dateadded", "date_added"},
        {"shortdescription", "short_description"},
        {"requiredaction", "required_action"},
        {"duedate", "due_date"},
        {"cvss", "cvss_score"},
        {"cvssscore", "cvss_score"},
        {"cwe", "cwe"},
        {"cwes", "cwe"},
        {"vector", "attack_vector"},
        {"attackvector", "attack_vector"},
        {"complexity", "complexity"},
        {"attackcomplexity", "complexity"},
        {"severity", "severity"},
    };
    return aliases;
}

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
};

// RFC-4180 style reader: quoted fields may contain commas, escaped quotes
// and newlines. Returns rows with the physical line each one starts on.
std::vector<CsvRow> read_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string field;
    CsvRow row;
    row.line_no = 1;
    std::size_t line = 1;
    bool quoted = false;
    bool row_has_content = false;
    char ch;

    auto end_field = [&]() {
        row.fields.push_back(field);
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back(std::move(row));
        row = CsvRow{};
        row.line_no = line;
        row_has_content = false;
    };

    while (in.get(ch)) {
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                quoted = true;
                row_has_content = true;
                break;
            case ',':
                end_field();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                if (row_has_content || !field.empty() || !row.fields.empty()) end_row();
                row.line_no = line;
                break;
            default:
                field.push_back(ch);
                row_has_content = true;
                break;
        }
    }
    if (row_has_content || !field.empty() || !row.fields.empty()) end_row();
    return rows;
}

bool valid_cve_id(const std::string& id) {
    // CVE-YYYY-NNNN+ shape.
    if (id.size() < 13 || id.compare(0, 4, "CVE-") != 0) return false;
    for (int i = 4; i < 8; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) return false;
    }
    if (id[8] != '-') return false;
    if (id.size() < 13) return false;
    for (std::size_t i = 9; i < id.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) return false;
    }
    return id.size() - 9 >= 4;
}

std::optional<double> parse_cvss(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    double value = 0.0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    if (value < 0.0 || value > 10.0) return std::nullopt;
    return value;
}

std::string field_or_empty(const CsvRow& row, const std::vector<int>& col_of, int slot) {
    const int idx = col_of[slot];
    if (idx < 0 || static_cast<std::size_t>(idx) >= row.fields.size()) return {};
    return row.fields[idx];
}

enum Slot {
    kCve = 0,
    kVendor,
    kProduct,
    kVulnName,
    kDateAdded,
    kShortDesc,
    kAction,
    kDueDate,
    kCvss,
    kCwe,
    kVector,
    kComplexity,
    kSeverity,
    kSlotCount
};

const char* slot_name(int slot) {
    static const char* names[kSlotCount] = {
        "cve_id",     "vendor_project",    "product",         "vulnerability_name",
        "date_added", "short_description", "required_action", "due_date",
        "cvss_score", "cwe",               "attack_vector",   "complexity",
        "severity"};
    return names[slot];
}

}  // namespace

std::optional<Date> Date::parse(const std::string& text) {
    const std::string t = trim(text);
    if (t.size() != 10 || t[4] != '-' || t[7] != '-') return std::nullopt;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i == 4 || i == 7) continue;
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return std::nullopt;
    }
    Date d;
    d.year = std::stoi(t.substr(0, 4));
    d.month = std::stoi(t.substr(5, 2));
    d.day = std::stoi(t.substr(8, 2));
    if (d.month < 1 || d.month > 12) return std::nullopt;
    static const int days_in[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int max_day = days_in[d.month - 1];
    const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    if (d.month == 2 && leap) max_day = 29;
    if (d.day < 1 || d.day > max_day) return std::nullopt;
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

ParseResult parse_kev_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + path.string());

    auto rows = read_csv(in);
    if (rows.empty()) throw DataError("input file has no header row: " + path.string());

    // Strip a UTF-8 BOM if present.
    if (!rows[0].fields.empty() && rows[0].fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
        rows[0].fields[0].erase(0, 3);
    }

    std::vector<int> col_of(kSlotCount, -1);
    for (std::size_t c = 0; c < rows[0].fields.size(); ++c) {
        const auto norm = normalize_header(trim(rows[0].fields[c]));
        const auto it = header_aliases().find(norm);
        if (it == header_aliases().end()) continue;  // unknown columns are ignored
        for (int slot = 0; slot < kSlotCount; ++slot) {
            if (it->second == slot_name(slot) && col_of[slot] < 0) {
                col_of[slot] = static_cast<int>(c);
            }
        }
    }

    std::string missing;
    for (int slot : {kCve, kVendor, kProduct, kDateAdded}) {
        if (col_of[slot] < 0) {
            if (!missing.empty()) missing += ", ";
            missing += slot_name(slot);
        }
    }
    if (!missing.empty()) {
        throw DataError("missing mandatory column(s): " + missing);
    }

    ParseResult result;
    result.data_rows = rows.size() - 1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        VulnRecord rec;
        rec.cve_id = trim(field_or_empty(row, col_of, kCve));
        rec.vendor_project = trim(field_or_empty(row, col_of, kVendor));
        rec.product = trim(field_or_empty(row, col_of, kProduct));
        const std::string date_text = field_or_empty(row, col_of, kDateAdded);

        std::string reason;
        if (!valid_cve_id(rec.cve_id)) {
            reason = "malformed cve_id '" + rec.cve_id + "'";
        } else if (rec.vendor_project.empty()) {
            reason = "empty vendor_project";
        } else if (rec.product.empty()) {
            reason = "empty product";
        } else if (auto date = Date::parse(date_text); !date) {
            reason = "unparseable date_added '" + trim(date_text) + "'";
        } else {
            rec.date_added = *date;
        }
        if (!reason.empty()) {
            result.rejects.push_back({row.line_no, std::move(reason)});
            continue;
        }

        rec.vulnerability_name = trim(field_or_empty(row, col_of, kVulnName));
        rec.short_description = trim(field_or_empty(row, col_of, kShortDesc));
        rec.required_action = trim(field_or_empty(row, col_of, kAction));
        rec.due_date = Date::parse(field_or_empty(row, col_of, kDueDate));
        rec.cvss_score = parse_cvss(field_or_empty(row, col_of, kCvss));
        rec.cwe = trim(field_or_empty(row, col_of, kCwe));
        rec.attack_vector = trim(field_or_empty(row, col_of, kVector));
        rec.complexity = trim(field_or_empty(row, col_of, kComplexity));
        rec.severity = trim(field_or_empty(row, col_of, kSeverity));
        result.records.push_back(std::move(rec));
    }
    return result;
}

std::vector<VulnRecord> filter_year(const std::vector<VulnRecord>& records, int year) {
    std::vector<VulnRecord> out;
    for (const auto& rec : records) {
        if (rec.date_added.year == year) out.push_back(rec);
    }
    return out;
}

std::size_t LabelEncoding::code_of(const std::string& category) const {
    const auto it = std::lower_bound(categories.begin(), categories.end(), category);
    if (it == categories.end() || *it != category) {
        throw UsageError("unknown category '" + category + "' in column " + column);
    }
    return static_cast<std::size_t>(it - categories.begin());
}

const std::string& LabelEncoding::category_of(std::size_t code) const {
    if (code >= categories.size()) {
        throw UsageError("code " + std::to_string(code) + " out of range for column " + column);
    }
    return categories[code];
}

EncodedData label_encode(const std::vector<VulnRecord>& records,
                         std::span<const FeatureColumn> columns) {
    if (columns.empty()) throw UsageError("label_encode needs at least one column");

    auto value_of = [](const VulnRecord& rec, FeatureColumn col) -> const std::string& {
        switch (col) {
            case FeatureColumn::vendor_project:
                return rec.vendor_project;
            case FeatureColumn::product:
                return rec.product;
        }
        throw UsageError("unknown feature column");
    };
    auto name_of = [](FeatureColumn col) {
        return col == FeatureColumn::vendor_project ? "vendor_project" : "product";
    };

    EncodedData out;
    out.data = Dataset(records.size(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        std::set<std::string> distinct;
        for (const auto& rec : records) distinct.insert(value_of(rec, columns[c]));
        LabelEncoding enc;
        enc.column = name_of(columns[c]);
        enc.categories.assign(distinct.begin(), distinct.end());
        for (std::size_t r = 0; r < records.size(); ++r) {
            out.data.at(r, c) =
                static_cast<double>(enc.code_of(value_of(records[r], columns[c])));
        }
        out.encodings.push_back(std::move(enc));
    }
    return out;
}

Dataset min_max_normalize(const Dataset& data, const NormalizationRange& range) {
    if (!(range.lo < range.hi)) throw UsageError("normalization range requires lo < hi");
    data.check_finite();
    Dataset out = data;
    for (std::size_t c = 0; c < data.cols; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < data.rows; ++r) {
            lo = std::min(lo, data.at(r, c));
            hi = std::max(hi, data.at(r, c));
        }
        if (data.rows == 0) continue;
        if (hi == lo) {
            std::cerr << "qclust: warning: constant column " << c << " normalized to "
                      << range.lo << "\n";
            for (std::size_t r = 0; r < data.rows; ++r) out.at(r, c) = range.lo;
            continue;
        }
        const double scale = (range.hi - range.lo) / (hi - lo);
        for (std::size_t r = 0; r < data.rows; ++r) {
            out.at(r, c) = range.lo + (data.at(r, c) - lo) * scale;
        }
    }
    return out;
}

std::vector<ClusterProfile> cluster_profile(const std::vector<VulnRecord>& records,
                                            const std::vector<int>& assignments, int k) {
    if (records.size() != assignments.size()) {
        throw UsageError("assignments length does not match record count");
    }
    if (k < 1) throw UsageError("k must be at least 1");
    for (int a : assignments) {
        if (a < 0 || a >= k) throw UsageError("assignment value out of range");
    }

    std::vector<std::map<std::string, std::size_t>> vendor_counts(k);
    std::vector<std::map<std::string, std::size_t>> product_counts(k);
    std::vector<ClusterProfile> profiles(k);
    for (int c = 0; c < k; ++c) profiles[c].cluster_id = c;

    for (std::size_t i = 0; i < records.size(); ++i) {
        const int c = assignments[i];
        ++profiles[c].size;
        ++vendor_counts[c][records[i].vendor_project];
        ++product_counts[c][records[i].product];
        ++profiles[c].severity_histogram[records[i].severity];
    }

    auto ranked = [](const std::map<std::string, std::size_t>& counts) {
        std::vector<std::pair<std::string, std::size_t>> v(counts.begin(), counts.end());
        std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        return v;
    };
    for (int c = 0; c < k; ++c) {
        profiles[c].top_vendors = ranked(vendor_counts[c]);
        profiles[c].top_products = ranked(product_counts[c]);
    }
    return profiles;
}

}  // namespace qclust::ingest
