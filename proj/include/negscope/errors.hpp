#pragma once

#include <stdexcept>
#include <string>

namespace negscope {

// Malformed input files (CD-SCO columns, XML, tensor files, ...).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller passed something that violates a pre-condition.
struct ArgumentError : std::runtime_error {
  explicit ArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed input whose content is inconsistent (label conflicts,
// out-of-range ids, mismatched corpora, ...).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or missing configuration: unknown backend, absent checkpoint files.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Optimization failures (non-finite loss and friends).
struct TrainError : std::runtime_error {
  explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor shape disagreements between data and model.
struct ShapeError : DataError {
  explicit ShapeError(const std::string& msg) : DataError(msg) {}
};

// Broken internal invariant; indicates a bug, not bad input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace negscope
