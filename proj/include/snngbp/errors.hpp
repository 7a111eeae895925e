// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace snngbp {

/// A Gaussian message with non-finite or non-positive variance (or non-finite mean).
class InvalidMessageError : public std::invalid_argument {
 public:
  explicit InvalidMessageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Scaling by a = 0 (the node function becomes non-invertible).
class SingularScaleError : public std::invalid_argument {
 public:
  explicit SingularScaleError(const std::string& what) : std::invalid_argument(what) {}
};

/// A configuration value violates a type invariant.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Inconsistent network or factor-graph structure (dangling ids, cycles, bad ports).
class GraphError : public std::invalid_argument {
 public:
  explicit GraphError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation that needs trained weights was invoked without them.
class NotTrainedError : public std::runtime_error {
 public:
  explicit NotTrainedError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or mismatching on-disk artifact (weight files, CSV inputs).
class FileFormatError : public std::runtime_error {
 public:
  explicit FileFormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem trouble: a path that cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user-level request (unknown node name, bad direction, ...).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace snngbp
