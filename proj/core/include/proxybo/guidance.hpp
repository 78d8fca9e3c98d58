#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxybo/proxies.hpp"
#include "proxybo/rng.hpp"
#include "proxybo/space.hpp"
#include "proxybo/stats.hpp"
#include "proxybo/surrogate.hpp"

namespace proxybo {

// Number of pairs j < k with (scores[j] < scores[k]) == (y[j] < y[k]).
// Strict comparisons on both sides: a pair tied in both counts as preserved,
// a pair tied in only one side counts when the other side has y[j] >= y[k].
std::int64_t order_preserving_pairs(std::span<const double> scores,
                                    std::span<const double> y);

// F for a proxy, with scores[j] = P(x_j) aligned with D.
std::int64_t pair_count_proxy(std::span<const double> scores, const ObservationSet& data);
// F for the surrogate from out-of-fold predictions aligned with D.
std::int64_t pair_count_surrogate(std::span<const double> cv_predictions,
                                  const ObservationSet& data);

// G = 2F / (n (n - 1)). Throws InvalidArgument when n < 2.
double normalize_g(std::int64_t pairs, std::size_t n);

enum class LogBase { natural, base10 };

struct InfluenceVector {
  std::vector<double> g;        // component 0 is the surrogate, then proxies
  std::vector<double> weights;  // softmax of g / tau; sums to 1
  double tau = 0.0;
  int iteration = 0;
};

// tau = tau0 / (1 + log T); weights = softmax(g / tau), evaluated shifted by
// max(g) so large 1/tau cannot overflow.
InfluenceVector influence(std::span<const double> g, int iteration, double tau0,
                          LogBase base = LogBase::natural);

// Per-candidate ranks for each component (rank 1 = most promising).
struct ComponentScoreTable {
  std::vector<std::vector<double>> raw;    // [component][candidate]
  std::vector<RankOrder> order;            // how each component is ranked
  std::vector<std::vector<double>> ranks;  // filled by compute_ranks()

  void compute_ranks();
  std::size_t candidate_count() const { return raw.empty() ? 0 : raw.front().size(); }
};

// CR(x_j) = sum_c weight_c * rank_c(x_j).
std::vector<double> combined_ranking(const ComponentScoreTable& table,
                                     std::span<const double> weights);

// Index of the smallest value; ties resolve to the lowest index.
std::size_t argmin_first(std::span<const double> values);
std::size_t argmax_first(std::span<const double> values);

struct SamplerOptions {
  int q = 500;
  double tau0 = 0.05;
  LogBase log_base = LogBase::natural;
  // Below this many observations the sampler returns a random encoding.
  std::size_t min_observations = 5;
  int cv_folds = 5;
  // Local candidates are single-edit mutations of the best `top_parents`.
  int top_parents = 3;
  ForestOptions forest;
};

// Uniformly random encoding not yet in `data`. Rejection sampling with an
// enumeration fallback; throws SearchComplete when nothing is left.
ArchEncoding sample_unevaluated(const ObservationSet& data,
                                const SearchSpaceSpec& space, Rng& rng);

// Up to q distinct unevaluated candidates: floor(q/2) single-edit mutations of
// the best observed encodings, the rest uniform. Unfilled local slots fall
// back to uniform draws. When at most q encodings remain unevaluated, all of
// them are returned in lexicographic order. Throws SearchComplete when none
// remain.
std::vector<ArchEncoding> generate_candidates(const ObservationSet& data,
                                              const SearchSpaceSpec& space,
                                              const SamplerOptions& options,
                                              Rng& rng);

// G for the surrogate (from cross-validation) and every proxy, then influence.
InfluenceVector measure_guidance(const ObservationSet& data,
                                 const SearchSpaceSpec& space,
                                 std::span<const ProxyPtr> proxies, int iteration,
                                 const SamplerOptions& options,
                                 std::uint64_t cv_seed);

struct SampleResult {
  ArchEncoding choice;
  std::optional<InfluenceVector> influence;  // empty on cold start
  std::size_t candidate_count = 0;
};

// One proposal step: cold start below min_observations, otherwise measure
// guidance, draw candidates, rank by EI (descending) and by each proxy
// (ascending), and return the argmin of the combined ranking. `model` must be
// fitted on `data` whenever data.size() >= min_observations.
SampleResult sample_next(const ObservationSet& data, int iteration,
                         const RandomForest* model,
                         std::span<const ProxyPtr> proxies,
                         const SearchSpaceSpec& space,
                         const SamplerOptions& options, Rng& rng,
                         std::uint64_t cv_seed);

}  // namespace proxybo
