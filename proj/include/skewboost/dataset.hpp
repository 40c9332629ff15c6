#ifndef SKEWBOOST_DATASET_HPP
#define SKEWBOOST_DATASET_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace skewboost {

// Dense row-major matrix of feature values.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t row, std::size_t col) { return values_[row * cols_ + col]; }
  double at(std::size_t row, std::size_t col) const { return values_[row * cols_ + col]; }

  std::span<const double> row(std::size_t index) const {
    return {values_.data() + index * cols_, cols_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Instances with binary labels and optional group ids (one per row) for
// leave-one-group-out splitting.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> group_ids;

  std::size_t size() const { return labels.size(); }
  bool has_groups() const { return !group_ids.empty(); }

  // All feature values finite, labels in {0,1}, extents consistent.
  void validate() const;
};

// Rows of `data` at `indices`, in the given order.
Dataset subset(const Dataset& data, std::span<const std::size_t> indices);

}  // namespace skewboost

#endif  // SKEWBOOST_DATASET_HPP
