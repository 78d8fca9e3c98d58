#include "proxybo/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "proxybo/acquisition.hpp"
#include "proxybo/error.hpp"

namespace proxybo {

std::int64_t order_preserving_pairs(std::span<const double> scores, std::span<const double> y) {
  if (scores.size() != y.size()) {
    throw InvalidArgument("pair count: " + std::to_string(scores.size()) + " scores for " +
                          std::to_string(y.size()) + " observations");
  }
  const std::size_t n = y.size();
  std::int64_t f = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      f += (scores[j] < scores[k]) == (y[j] < y[k]);
    }
  }
  return f;
}

std::int64_t pair_count_proxy(std::span<const double> scores, const ObservationSet& data) {
  const auto y = data.targets();
  return order_preserving_pairs(scores, y);
}

std::int64_t pair_count_surrogate(std::span<const double> cv_predictions,
                                  const ObservationSet& data) {
  const auto y = data.targets();
  return order_preserving_pairs(cv_predictions, y);
}

double normalize_g(std::int64_t pairs, std::size_t n) {
  if (n < 2) throw InvalidArgument("G is undefined for fewer than 2 observations");
  return 2.0 * static_cast<double>(pairs) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

InfluenceVector influence(std::span<const double> g, int iteration, double tau0, LogBase base) {
  if (iteration < 1) throw InvalidArgument("influence: iteration must be >= 1");
  if (!(tau0 > 0.0)) throw InvalidArgument("influence: tau0 must be > 0");
  if (g.empty()) throw InvalidArgument("influence: no components");
  InfluenceVector iv;
  iv.g.assign(g.begin(), g.end());
  iv.iteration = iteration;
  const double t = static_cast<double>(iteration);
  iv.tau = tau0 / (1.0 + (base == LogBase::natural ? std::log(t) : std::log10(t)));
  const double gmax = *std::max_element(g.begin(), g.end());
  iv.weights.resize(g.size());
  double z = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    iv.weights[c] = std::exp((g[c] - gmax) / iv.tau);
    z += iv.weights[c];
  }
  for (double& w : iv.weights) w /= z;
  return iv;
}

void ComponentScoreTable::compute_ranks() {
  if (order.size() != raw.size()) throw InvalidArgument("rank order missing for a component");
  ranks.clear();
  for (std::size_t c = 0; c < raw.size(); ++c) {
    if (raw[c].size() != candidate_count()) throw InvalidArgument("components disagree on candidate count");
    ranks.push_back(average_ranks(raw[c], order[c]));
  }
}

std::vector<double> combined_ranking(const ComponentScoreTable& table,
                                     std::span<const double> weights) {
  if (weights.size() != table.ranks.size()) {
    throw InvalidArgument("combined ranking: " + std::to_string(weights.size()) +
                          " weights for " + std::to_string(table.ranks.size()) + " components");
  }
  std::vector<double> cr(table.candidate_count(), 0.0);
  for (std::size_t c = 0; c < table.ranks.size(); ++c) {
    for (std::size_t j = 0; j < cr.size(); ++j) cr[j] += weights[c] * table.ranks[c][j];
  }
  return cr;
}

std::size_t argmin_first(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("argmin of empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

std::size_t argmax_first(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("argmax of empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

namespace {

constexpr int kRejectionTries = 64;

// Remaining unevaluated encodings, in lexicographic order.
std::vector<ArchEncoding> unevaluated(const ObservationSet& data, const SearchSpaceSpec& space) {
  std::vector<ArchEncoding> out;
  enumerate(space, [&](const ArchEncoding& x) {
    if (!data.contains(x)) out.push_back(x);
  });
  return out;
}

bool exhausted(const ObservationSet& data, const SearchSpaceSpec& space) {
  return static_cast<double>(data.size()) >= space.size();
}

}  // namespace

ArchEncoding sample_unevaluated(const ObservationSet& data, const SearchSpaceSpec& space,
                                Rng& rng) {
  if (exhausted(data, space)) throw SearchComplete("every encoding has been evaluated");
  for (int t = 0; t < kRejectionTries; ++t) {
    ArchEncoding x = sample_uniform(space, rng);
    if (!data.contains(x)) return x;
  }
  if (space.size() <= kDefaultEnumerationCap) {
    auto left = unevaluated(data, space);
    return left[static_cast<std::size_t>(rng.index(static_cast<int>(left.size())))];
  }
  while (true) {
    ArchEncoding x = sample_uniform(space, rng);
    if (!data.contains(x)) return x;
  }
}

std::vector<ArchEncoding> generate_candidates(const ObservationSet& data,
                                              const SearchSpaceSpec& space,
                                              const SamplerOptions& options, Rng& rng) {
  if (options.q < 1) throw InvalidArgument("Q must be >= 1");
  if (exhausted(data, space)) throw SearchComplete("every encoding has been evaluated");
  const auto q = static_cast<std::size_t>(options.q);
  const double remaining = space.size() - static_cast<double>(data.size());
  if (remaining <= static_cast<double>(q) && space.size() <= kDefaultEnumerationCap) {
    return unevaluated(data, space);
  }

  std::vector<ArchEncoding> out;
  std::unordered_set<ArchEncoding, ArchEncodingHash> taken;
  out.reserve(q);
  auto accept = [&](ArchEncoding x) {
    if (data.contains(x) || taken.count(x)) return false;
    taken.insert(x);
    out.push_back(std::move(x));
    return true;
  };

  const std::size_t n_local = data.empty() ? 0 : q / 2;
  const auto parents = data.best_indices(static_cast<std::size_t>(std::max(1, options.top_parents)));
  for (std::size_t attempt = 0; out.size() < n_local && attempt < 4 * n_local; ++attempt) {
    const auto& parent = data[parents[attempt % parents.size()]].x;
    accept(mutate_one_edge(parent, space, rng));
  }
  const std::size_t max_attempts = 20 * q;
  for (std::size_t attempt = 0; out.size() < q && attempt < max_attempts; ++attempt) {
    accept(sample_uniform(space, rng));
  }
  if (out.empty()) out.push_back(sample_unevaluated(data, space, rng));
  return out;
}

InfluenceVector measure_guidance(const ObservationSet& data, const SearchSpaceSpec& space,
                                 std::span<const ProxyPtr> proxies, int iteration,
                                 const SamplerOptions& options, std::uint64_t cv_seed) {
  std::vector<double> g;
  g.reserve(proxies.size() + 1);
  const auto cv = cv_predict(data, space, options.cv_folds, cv_seed, options.forest);
  g.push_back(normalize_g(pair_count_surrogate(cv.predictions, data), data.size()));
  std::vector<double> scores(data.size());
  for (const auto& p : proxies) {
    for (std::size_t j = 0; j < data.size(); ++j) scores[j] = p->score(data[j].x);
    g.push_back(normalize_g(pair_count_proxy(scores, data), data.size()));
  }
  return influence(g, iteration, options.tau0, options.log_base);
}

SampleResult sample_next(const ObservationSet& data, int iteration, const RandomForest* model,
                         std::span<const ProxyPtr> proxies, const SearchSpaceSpec& space,
                         const SamplerOptions& options, Rng& rng, std::uint64_t cv_seed) {
  SampleResult res;
  if (data.size() < std::max<std::size_t>(options.min_observations, 2)) {
    res.choice = sample_unevaluated(data, space, rng);
    res.candidate_count = 1;
    return res;
  }
  if (!model) throw ModelUnfit("sample_next needs a fitted surrogate");

  InfluenceVector iv = measure_guidance(data, space, proxies, iteration, options, cv_seed);
  const auto candidates = generate_candidates(data, space, options, rng);
  const double y_best = data.best_y();

  ComponentScoreTable table;
  table.raw.assign(proxies.size() + 1, std::vector<double>(candidates.size()));
  table.order.assign(proxies.size() + 1, RankOrder::ascending);
  table.order[0] = RankOrder::descending;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const auto pred = model->predict(candidates[j]);
    table.raw[0][j] = expected_improvement(pred.mean, pred.variance, y_best);
  }
  for (std::size_t p = 0; p < proxies.size(); ++p) {
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      table.raw[p + 1][j] = proxies[p]->score(candidates[j]);
    }
  }
  table.compute_ranks();
  const auto cr = combined_ranking(table, iv.weights);
  res.choice = candidates[argmin_first(cr)];
  res.influence = std::move(iv);
  res.candidate_count = candidates.size();
  return res;
}

}  // namespace proxybo
