#ifndef SKEWBOOST_ERRORS_HPP
#define SKEWBOOST_ERRORS_HPP

#include <stdexcept>

namespace skewboost {

// Argument values outside the documented domain (bad labels, non-finite
// scores, empty training data, malformed parameters).
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mismatched vector lengths or matrix extents.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed model documents; the message carries the location.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV ingestion failures; the message names the offending line and column.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Files that cannot be opened, read, or written.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cross-validation plans that cannot be realized on the given dataset.
class InvalidPlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Metric requested on an empty confusion matrix.
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace skewboost

#endif  // SKEWBOOST_ERRORS_HPP
