#pragma once

#include <stdexcept>
#include <string>

namespace qkb {

/// Precondition violations (bad indices, size mismatches, invalid parameters).
class ArgumentError : public std::invalid_argument {
  public:
    explicit ArgumentError(const std::string &msg) : std::invalid_argument(msg) {}
};

/// A data row that cannot be encoded (e.g. zero vector for amplitude encoding).
class EncodingError : public std::runtime_error {
  public:
    explicit EncodingError(const std::string &msg) : std::runtime_error(msg) {}
};

/// SVC training failures (single-class labels, non-convergence).
class TrainingError : public std::runtime_error {
  public:
    explicit TrainingError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Dataset ingestion failures; message names the offending row/column.
class IngestError : public std::runtime_error {
  public:
    explicit IngestError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Baseline import failures (missing columns, split-count mismatch).
class ImportError : public std::runtime_error {
  public:
    explicit ImportError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Metric computation failures (e.g. AUC with a single class).
class MetricError : public std::runtime_error {
  public:
    explicit MetricError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace qkb
