#include "proxybo/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "proxybo/error.hpp"
#include "proxybo/rng.hpp"

namespace proxybo {

void ObservationSet::add(ArchEncoding x, double y, int iteration) {
  if (!std::isfinite(y)) throw InvalidArgument("observation y must be finite");
  if (!items_.empty() && iteration <= items_.back().iteration) {
    throw InvalidArgument("observation iterations must strictly increase");
  }
  seen_.insert(x);
  items_.push_back(Observation{std::move(x), y, iteration});
}

std::vector<double> ObservationSet::targets() const {
  std::vector<double> y;
  y.reserve(items_.size());
  for (const auto& o : items_) y.push_back(o.y);
  return y;
}

double ObservationSet::best_y() const {
  if (items_.empty()) throw InvalidArgument("no observations");
  double b = items_.front().y;
  for (const auto& o : items_) b = std::min(b, o.y);
  return b;
}

std::vector<std::size_t> ObservationSet::best_indices(std::size_t count) const {
  std::vector<std::size_t> idx(items_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](auto a, auto b) { return items_[a].y < items_[b].y; });
  idx.resize(std::min(count, idx.size()));
  return idx;
}

namespace {

struct Builder {
  std::span<const Observation* const> data;
  int ops;
  int min_leaf;
  std::vector<RegressionTree::Node>* nodes;
  // scratch per value
  std::vector<double> count, sum;

  int grow(std::vector<int>& rows) {
    const int id = static_cast<int>(nodes->size());
    nodes->emplace_back();
    const double n = static_cast<double>(rows.size());
    double total = 0.0, lo = data[rows[0]]->y, hi = lo;
    for (int r : rows) {
      const double y = data[r]->y;
      total += y;
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    (*nodes)[id].leaf_mean = total / n;
    if (rows.size() < static_cast<std::size_t>(2 * min_leaf) || lo == hi) return id;

    double sse = 0.0;
    const double m = total / n;
    for (int r : rows) sse += (data[r]->y - m) * (data[r]->y - m);

    const int dims = static_cast<int>(data[rows[0]]->x.size());
    double best_gain = 1e-12 * sse;
    int best_dim = -1, best_value = 0;
    const double base = total * total / n;
    for (int d = 0; d < dims; ++d) {
      std::fill(count.begin(), count.end(), 0.0);
      std::fill(sum.begin(), sum.end(), 0.0);
      for (int r : rows) {
        const int v = data[r]->x[d];
        count[v] += 1.0;
        sum[v] += data[r]->y;
      }
      for (int v = 0; v < ops; ++v) {
        const double nl = count[v];
        const double nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double sl = sum[v];
        const double sr = total - sl;
        const double gain = sl * sl / nl + sr * sr / nr - base;
        if (gain > best_gain) {
          best_gain = gain;
          best_dim = d;
          best_value = v;
        }
      }
    }
    if (best_dim < 0) return id;

    std::vector<int> left, right;
    left.reserve(rows.size());
    right.reserve(rows.size());
    for (int r : rows) (data[r]->x[best_dim] == best_value ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(left);
    const int rgt = grow(right);
    auto& node = (*nodes)[id];
    node.dim = best_dim;
    node.value = best_value;
    node.left = l;
    node.right = rgt;
    return id;
  }
};

std::vector<const Observation*> canonical(std::span<const Observation> data) {
  std::vector<const Observation*> out;
  out.reserve(data.size());
  for (const auto& o : data) out.push_back(&o);
  std::sort(out.begin(), out.end(), [](const Observation* a, const Observation* b) {
    if (a->x != b->x) return a->x < b->x;
    return a->y < b->y;
  });
  return out;
}

}  // namespace

RegressionTree RegressionTree::build(std::span<const Observation* const> data,
                                     std::span<const int> sample, int ops_per_edge,
                                     int min_leaf) {
  if (sample.empty()) throw ModelUnfit("cannot build a tree on an empty sample");
  RegressionTree tree;
  Builder b{data, ops_per_edge, std::max(1, min_leaf), &tree.nodes_,
            std::vector<double>(ops_per_edge), std::vector<double>(ops_per_edge)};
  std::vector<int> rows(sample.begin(), sample.end());
  b.grow(rows);
  return tree;
}

double RegressionTree::predict(const ArchEncoding& x) const {
  int i = 0;
  while (nodes_[i].dim >= 0) {
    const auto& n = nodes_[i];
    i = x[n.dim] == n.value ? n.left : n.right;
  }
  return nodes_[i].leaf_mean;
}

namespace {

void fit_any(std::span<const Observation> data, const SearchSpaceSpec& space,
                     std::uint64_t seed, const ForestOptions& options,
                     std::vector<RegressionTree>& trees, std::size_t& training_size) {
  const auto rows = canonical(data);
  const int n = static_cast<int>(rows.size());
  std::vector<int> sample(n);
  trees.clear();
  trees.reserve(options.num_trees);
  for (int t = 0; t < options.num_trees; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (int& s : sample) s = rng.index(n);
    trees.push_back(RegressionTree::build(rows, sample, space.ops_per_edge, options.min_leaf));
  }
  training_size = rows.size();
}

}  // namespace

RandomForest RandomForest::fit(std::span<const Observation> data, const SearchSpaceSpec& space,
                               std::uint64_t seed, const ForestOptions& options) {
  if (data.size() < 2) throw ModelUnfit("forest needs at least 2 observations");
  if (options.num_trees < 1) throw InvalidArgument("forest needs at least one tree");
  RandomForest forest;
  forest.options_ = options;
  fit_any(data, space, seed, options, forest.trees_, forest.training_size_);
  return forest;
}

RandomForest RandomForest::fit(const ObservationSet& data, const SearchSpaceSpec& space,
                               std::uint64_t seed, const ForestOptions& options) {
  std::vector<Observation> v(data.begin(), data.end());
  return fit(std::span<const Observation>(v), space, seed, options);
}

std::vector<double> RandomForest::tree_predictions(const ArchEncoding& x) const {
  std::vector<double> out;
  out.reserve(trees_.size());
  for (const auto& t : trees_) out.push_back(t.predict(x));
  return out;
}

Prediction RandomForest::predict(const ArchEncoding& x) const {
  double s = 0.0, ss = 0.0;
  for (const auto& t : trees_) {
    const double p = t.predict(x);
    s += p;
  }
  const double n = static_cast<double>(trees_.size());
  const double m = s / n;
  for (const auto& t : trees_) {
    const double d = t.predict(x) - m;
    ss += d * d;
  }
  return Prediction{m, std::max(ss / n, options_.variance_floor)};
}

CrossValidation cv_predict(const ObservationSet& data, const SearchSpaceSpec& space, int k,
                           std::uint64_t seed, const ForestOptions& options) {
  const std::size_t n = data.size();
  if (n < 2) throw InvalidArgument("cross-validation needs at least 2 observations");
  if (k < 2) throw InvalidArgument("cross-validation needs k >= 2");
  k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), n));

  CrossValidation cv;
  cv.k = k;
  cv.predictions.assign(n, 0.0);
  cv.folds.resize(n);
  for (std::size_t j = 0; j < n; ++j) cv.folds[j] = fold_of(j, k);

  std::vector<Observation> train;
  std::vector<RegressionTree> trees;
  for (int f = 0; f < k; ++f) {
    train.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (cv.folds[j] != f) train.push_back(data[j]);
    }
    std::size_t size = 0;
    fit_any(train, space, derive_seed(seed, static_cast<std::uint64_t>(f)), options, trees, size);
    for (std::size_t j = 0; j < n; ++j) {
      if (cv.folds[j] != f) continue;
      double s = 0.0;
      for (const auto& t : trees) s += t.predict(data[j].x);
      cv.predictions[j] = s / static_cast<double>(trees.size());
    }
  }
  return cv;
}

}  // namespace proxybo
