#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qclust/error.hpp"

namespace qclust {

/// Row-major M x N feature matrix.
struct Dataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Dataset() = default;
    Dataset(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    /// Builds from row vectors; throws DataError if ragged.
    static Dataset from_rows(const std::vector<std::vector<double>>& r) {
        Dataset d;
        d.rows = r.size();
        d.cols = r.empty() ? 0 : r.front().size();
        d.values.reserve(d.rows * d.cols);
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i].size() != d.cols) {
                throw DataError("ragged dataset: row " + std::to_string(i) + " has " +
                                std::to_string(r[i].size()) + " columns, expected " +
                                std::to_string(d.cols));
            }
            d.values.insert(d.values.end(), r[i].begin(), r[i].end());
        }
        return d;
    }

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }

    std::span<const double> row(std::size_t r) const { return {&values[r * cols], cols}; }
    std::span<double> row(std::size_t r) { return {&values[r * cols], cols}; }

    /// Throws DataError on NaN or infinity.
    void check_finite() const {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) {
                throw DataError("non-finite value at row " + std::to_string(i / cols) +
                                ", column " + std::to_string(i % cols));
            }
        }
    }
};

}  // namespace qclust
