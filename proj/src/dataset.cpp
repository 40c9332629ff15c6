#include "skewboost/dataset.hpp"

#include <cmath>
#include <string>

#include "skewboost/errors.hpp"

namespace skewboost {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw DimensionError("matrix value count does not match rows * cols");
  }
}

void Dataset::validate() const {
  if (features.rows() != labels.size()) {
    throw DimensionError("feature rows (" + std::to_string(features.rows()) +
                         ") and labels (" + std::to_string(labels.size()) +
                         ") differ in count");
  }
  if (!group_ids.empty() && group_ids.size() != labels.size()) {
    throw DimensionError("group ids present but their count (" +
                         std::to_string(group_ids.size()) +
                         ") does not match the instance count");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw InvalidInputError("label at row " + std::to_string(i) +
                              " must be 0 or 1, got " +
                              std::to_string(labels[i]));
    }
  }
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      if (!std::isfinite(features.at(r, c))) {
        throw InvalidInputError("feature value at row " + std::to_string(r) +
                                ", column " + std::to_string(c) +
                                " is not finite");
      }
    }
  }
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
  for (std::size_t idx : indices) {
    if (idx >= data.size()) {
      throw InvalidInputError("subset index " + std::to_string(idx) +
                              " is out of range for " +
                              std::to_string(data.size()) + " instances");
    }
  }
  Dataset out;
  out.features = Matrix(indices.size(), data.features.cols());
  out.labels.reserve(indices.size());
  if (data.has_groups()) {
    out.group_ids.reserve(indices.size());
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    std::size_t src = indices[i];
    for (std::size_t c = 0; c < data.features.cols(); ++c) {
      out.features.at(i, c) = data.features.at(src, c);
    }
    out.labels.push_back(data.labels[src]);
    if (data.has_groups()) {
      out.group_ids.push_back(data.group_ids[src]);
    }
  }
  return out;
}

}  // namespace skewboost
