#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qclust {

/// Caller misuse: bad indices, mismatched dimensions, invalid arguments.
/// Mapped to exit code 2 by the CLI.
class UsageError : public std::invalid_argument {
  public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid configuration values (qubit count out of range, k > M, ...).
class ConfigError : public UsageError {
  public:
    explicit ConfigError(const std::string& what) : UsageError(what) {}
};

/// Problems with input data: unreadable files, missing columns, non-finite
/// values. Mapped to exit code 3 by the CLI.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Feature values that cannot be encoded into a quantum state.
class EncodingError : public DataError {
  public:
    explicit EncodingError(const std::string& what) : DataError(what) {}
};

/// Requested metric has no defined value for the given partition
/// (k < 2, zero within-cluster scatter, coincident centroids).
class MetricUndefinedError : public UsageError {
  public:
    explicit MetricUndefinedError(const std::string& what) : UsageError(what) {}
};

/// Internal invariant check. Violations are bugs, not user errors; abort so
/// the process exits with a code distinct from the usage/data error paths.
inline void internal_check(bool cond, const char* msg) {
    if (!cond) {
        std::fprintf(stderr, "qclust: internal invariant violated: %s\n", msg);
        std::abort();
    }
}

}  // namespace qclust
