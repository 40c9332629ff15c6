#ifndef SKEWBOOST_TESTS_SUPPORT_FIXTURES_HPP
#define SKEWBOOST_TESTS_SUPPORT_FIXTURES_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "skewboost/dataset.hpp"

namespace skewboost::testing {

// Deterministic uniform variates with a pinned draw rule, so fixture bytes
// never shift across standard libraries or build modes.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double next01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double range(double lo, double hi) { return lo + (hi - lo) * next01(); }

  std::uint64_t next_below(std::uint64_t bound) { return rng_() % bound; }

 private:
  std::mt19937_64 rng_;
};

// Noisy linear rule: label = sign(w.x + noise). Nearly separable, so
// boosting drives the training loss down quickly.
inline Dataset make_separable_fixture(std::size_t rows = 200,
                                      std::size_t cols = 5,
                                      std::uint64_t seed = 41) {
  Uniform rng(seed);
  std::vector<double> weights(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    weights[j] =
        (j % 2 == 0 ? 1.0 : -1.0) * (0.5 + 0.25 * static_cast<double>(j));
  }
  Dataset data;
  data.features = Matrix(rows, cols);
  data.labels.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double score = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      double value = rng.range(-2.0, 2.0);
      data.features.at(i, j) = value;
      score += weights[j] * value;
    }
    score += rng.range(-0.5, 0.5);
    data.labels[i] = score > 0.0 ? 1 : 0;
  }
  return data;
}

// 9:1 imbalance with the minority (label 1) in the leading rows. The class
// clouds overlap, so minority recall is genuinely imperfect and responds to
// the loss weighting.
inline Dataset make_imbalanced_fixture(std::size_t rows = 500,
                                       std::uint64_t seed = 99) {
  const std::size_t cols = 4;
  const std::size_t positives = rows / 10;
  Dataset data;
  data.features = Matrix(rows, cols);
  data.labels.resize(rows);
  Uniform rng(seed);
  for (std::size_t i = 0; i < rows; ++i) {
    bool positive = i < positives;
    data.labels[i] = positive ? 1 : 0;
    double shift = positive ? 1.0 : 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      data.features.at(i, j) = shift + rng.range(-2.0, 2.0);
    }
  }
  return data;
}

// One feature, two instances with distinct values and opposite labels.
inline Dataset tiny_two_instance_dataset() {
  Dataset data;
  data.features = Matrix(2, 1, {0.0, 1.0});
  data.labels = {1, 0};
  return data;
}

// One feature, cleanly separated value clusters; leave-one-out classifies
// every held-out instance correctly.
inline Dataset separated_four_instance_dataset() {
  Dataset data;
  data.features = Matrix(4, 1, {0.0, 1.0, 10.0, 11.0});
  data.labels = {0, 0, 1, 1};
  return data;
}

}  // namespace skewboost::testing

#endif  // SKEWBOOST_TESTS_SUPPORT_FIXTURES_HPP
