#include "skewboost/tree.hpp"

#include <cstddef>
#include <string>

#include "skewboost/errors.hpp"

namespace skewboost {

double Tree::predict_row(std::span<const double> row) const {
  if (nodes.empty()) {
    throw InvalidInputError("cannot predict with an empty tree");
  }
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const TreeNode& node = nodes[at];
    if (static_cast<std::size_t>(node.feature_index) >= row.size()) {
      throw DimensionError("tree expects feature index " +
                           std::to_string(node.feature_index) +
                           " but the row has " + std::to_string(row.size()) +
                           " features");
    }
    int next = row[static_cast<std::size_t>(node.feature_index)] <=
                       node.threshold
                   ? node.left
                   : node.right;
    if (next < 0 || static_cast<std::size_t>(next) >= nodes.size()) {
      throw InvalidInputError("tree node has a dangling child link");
    }
    at = static_cast<std::size_t>(next);
  }
  return nodes[at].leaf_weight;
}

}  // namespace skewboost
