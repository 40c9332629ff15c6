#ifndef SKEWBOOST_CSV_HPP
#define SKEWBOOST_CSV_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "skewboost/dataset.hpp"

namespace skewboost {

// Comma-separated, header required. The label column must parse to 0 or 1;
// every remaining column except the optional group column is a feature and
// must parse to a finite real.
struct CsvSchema {
  std::string label_column;
  std::optional<std::string> group_column;
};

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

}  // namespace skewboost

#endif  // SKEWBOOST_CSV_HPP
