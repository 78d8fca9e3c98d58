#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "proxybo/space.hpp"

namespace proxybo {

struct Observation {
  ArchEncoding x;
  double y = 0.0;
  int iteration = 0;
};

// Evaluated encodings in insertion order, with membership lookup.
class ObservationSet {
 public:
  // Throws InvalidArgument when y is not finite or the iteration does not
  // strictly increase.
  void add(ArchEncoding x, double y, int iteration);
  void add(ArchEncoding x, double y) { add(std::move(x), y, next_iteration()); }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Observation& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool contains(const ArchEncoding& x) const { return seen_.count(x) != 0; }
  std::vector<double> targets() const;
  double best_y() const;
  // Indices of the `count` smallest-y observations, best first; ties keep
  // insertion order.
  std::vector<std::size_t> best_indices(std::size_t count) const;

  int next_iteration() const { return items_.empty() ? 1 : items_.back().iteration + 1; }

 private:
  std::vector<Observation> items_;
  std::unordered_set<ArchEncoding, ArchEncodingHash> seen_;
};

// Round-robin fold of the j-th inserted observation.
inline int fold_of(std::size_t j, int k) { return static_cast<int>(j % static_cast<std::size_t>(k)); }

struct ForestOptions {
  int num_trees = 10;
  int min_leaf = 2;
  double variance_floor = 1e-10;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Regression tree over one-hot categorical features. A split tests
// "dimension d takes value v".
class RegressionTree {
 public:
  struct Node {
    int dim = -1;  // -1 marks a leaf
    int value = 0;
    int left = -1;  // taken when x[dim] == value
    int right = -1;
    double leaf_mean = 0.0;
  };

  // Builds on the rows listed in `sample` (may repeat, as in a bootstrap).
  static RegressionTree build(std::span<const Observation* const> data,
                              std::span<const int> sample, int ops_per_edge,
                              int min_leaf);

  double predict(const ArchEncoding& x) const;
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

// Probabilistic random forest: bootstrap-resampled trees whose spread gives
// the predictive variance.
class RandomForest {
 public:
  // Throws ModelUnfit when fewer than 2 observations are given. Observations
  // are canonicalised (sorted by encoding, then y) before resampling, so the
  // result depends only on the data multiset and the seed.
  static RandomForest fit(std::span<const Observation> data,
                          const SearchSpaceSpec& space, std::uint64_t seed,
                          const ForestOptions& options = {});
  static RandomForest fit(const ObservationSet& data, const SearchSpaceSpec& space,
                          std::uint64_t seed, const ForestOptions& options = {});

  // mean over trees, population variance over trees floored at variance_floor.
  Prediction predict(const ArchEncoding& x) const;
  std::vector<double> tree_predictions(const ArchEncoding& x) const;
  std::size_t tree_count() const { return trees_.size(); }
  std::size_t training_size() const { return training_size_; }

 private:
  std::vector<RegressionTree> trees_;
  ForestOptions options_;
  std::size_t training_size_ = 0;
};

struct CrossValidation {
  std::vector<double> predictions;  // aligned with the observation set
  std::vector<int> folds;
  int k = 0;
};

// Out-of-fold mean predictions. Fold j's forest is trained on every
// observation whose fold differs. k shrinks to |D| when |D| < k; throws
// InvalidArgument when |D| < 2 or k < 2.
CrossValidation cv_predict(const ObservationSet& data, const SearchSpaceSpec& space,
                           int k, std::uint64_t seed,
                           const ForestOptions& options = {});

}  // namespace proxybo
