#include "proxybo/engine.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "proxybo/acquisition.hpp"
#include "proxybo/error.hpp"
#include "proxybo/log.hpp"

namespace proxybo {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::proxybo: return "proxybo";
    case Strategy::random: return "random";
    case Strategy::bo: return "bo";
    case Strategy::rea: return "rea";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "proxybo") return Strategy::proxybo;
  if (name == "random" || name == "rs") return Strategy::random;
  if (name == "bo") return Strategy::bo;
  if (name == "rea") return Strategy::rea;
  throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

void SearchRun::validate() const {
  if (!benchmark) throw InvalidArgument("benchmark: no table given");
  if (budget < 1) throw InvalidArgument("budget: must be >= 1");
  if (sampler.q < 1) throw InvalidArgument("q: must be >= 1");
  if (!(sampler.tau0 > 0.0)) throw InvalidArgument("tau0: must be > 0");
  if (population < 2) throw InvalidArgument("population: must be >= 2");
  if (!(tournament_fraction > 0.0 && tournament_fraction <= 1.0)) {
    throw InvalidArgument("tournament_fraction: must be in (0, 1]");
  }
}

bool RunTrace::operator==(const RunTrace& o) const {
  if (strategy != o.strategy || seed != o.seed || proxy_names != o.proxy_names ||
      best_index != o.best_index || records.size() != o.records.size()) {
    return false;
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = o.records[i];
    if (a.iteration != b.iteration || a.x != b.x || a.val != b.val || a.test != b.test ||
        a.best_val != b.best_val || a.best_test != b.best_test || a.cost != b.cost ||
        a.guidance.has_value() != b.guidance.has_value()) {
      return false;
    }
    if (a.guidance && (a.guidance->g != b.guidance->g || a.guidance->weights != b.guidance->weights ||
                       a.guidance->tau != b.guidance->tau ||
                       a.guidance->iteration != b.guidance->iteration)) {
      return false;
    }
  }
  return true;
}

namespace {

// Seed streams derived from the run seed. Candidate sampling shares one stream
// across strategies so cold starts coincide under a shared seed.
enum : std::uint64_t { kCandidateStream = 0, kForestStream = 1'000'000, kCvStream = 2'000'000 };

class Recorder {
 public:
  Recorder(const SearchRun& cfg, std::vector<std::string> proxy_names) : cfg_(cfg) {
    trace_.strategy = cfg.strategy;
    trace_.seed = cfg.seed;
    trace_.proxy_names = std::move(proxy_names);
  }

  bool done() const { return static_cast<int>(data_.size()) >= cfg_.budget; }
  int iteration() const { return static_cast<int>(data_.size()) + 1; }
  const ObservationSet& data() const { return data_; }

  double evaluate(const ArchEncoding& x, std::optional<InfluenceVector> guidance) {
    const BenchmarkTable& table = *cfg_.benchmark;
    const TableRecord* rec = table.find(x);
    if (!rec) {
      throw LookupError(std::string(to_string(cfg_.strategy)) + " run (seed " +
                        std::to_string(cfg_.seed) + ", iteration " + std::to_string(iteration()) +
                        "): encoding " + x.to_string() + " not in table '" +
                        table.meta().name + "'");
    }
    TraceRecord r;
    r.iteration = iteration();
    r.x = x;
    r.val = table.objective_val(*rec);
    r.test = table.objective_test(*rec);
    cost_ += rec->cost;
    r.cost = cost_;
    if (trace_.records.empty() || r.val < trace_.records[trace_.best_index].val) {
      trace_.best_index = trace_.records.size();
      r.best_val = r.val;
      r.best_test = r.test;
    } else {
      r.best_val = trace_.records[trace_.best_index].val;
      r.best_test = trace_.records[trace_.best_index].test;
    }
    r.guidance = std::move(guidance);
    data_.add(x, r.val, r.iteration);
    trace_.records.push_back(std::move(r));
    return data_[data_.size() - 1].y;
  }

  RunTrace finish() { return std::move(trace_); }

 private:
  const SearchRun& cfg_;
  RunTrace trace_;
  ObservationSet data_;
  double cost_ = 0.0;
};

std::vector<std::string> names_of(const std::vector<ProxyPtr>& proxies) {
  std::vector<std::string> out;
  for (const auto& p : proxies) out.push_back(p->name());
  return out;
}

std::vector<ProxyPtr> cached(const std::vector<ProxyPtr>& proxies) {
  std::vector<ProxyPtr> out;
  for (const auto& p : proxies) out.push_back(std::make_shared<CachingScorer>(p));
  return out;
}

std::optional<RandomForest> fit_if_ready(const SearchRun& cfg, const ObservationSet& data,
                                         int iteration) {
  if (data.size() < std::max<std::size_t>(cfg.sampler.min_observations, 2)) return std::nullopt;
  return RandomForest::fit(data, cfg.benchmark->spec(),
                           derive_seed(cfg.seed, kForestStream + iteration), cfg.sampler.forest);
}

}  // namespace

RunTrace run_proxybo(const SearchRun& cfg) {
  cfg.validate();
  const auto& space = cfg.benchmark->spec();
  const auto proxies = cached(cfg.proxies);
  Recorder rec(cfg, names_of(cfg.proxies));
  Rng rng(derive_seed(cfg.seed, kCandidateStream));
  try {
    while (!rec.done()) {
      const int it = rec.iteration();
      const auto model = fit_if_ready(cfg, rec.data(), it);
      auto res = sample_next(rec.data(), it, model ? &*model : nullptr, proxies, space,
                             cfg.sampler, rng, derive_seed(cfg.seed, kCvStream + it));
      rec.evaluate(res.choice, std::move(res.influence));
    }
  } catch (const SearchComplete&) {
    logger()->info("proxybo seed {}: space exhausted", cfg.seed);
  }
  return rec.finish();
}

RunTrace run_bo(const SearchRun& cfg) {
  cfg.validate();
  const auto& space = cfg.benchmark->spec();
  Recorder rec(cfg, {});
  Rng rng(derive_seed(cfg.seed, kCandidateStream));
  try {
    while (!rec.done()) {
      const int it = rec.iteration();
      const auto model = fit_if_ready(cfg, rec.data(), it);
      if (!model) {
        rec.evaluate(sample_unevaluated(rec.data(), space, rng), std::nullopt);
        continue;
      }
      // The surrogate's G is recorded for diagnostics only.
      auto iv = measure_guidance(rec.data(), space, {}, it, cfg.sampler,
                                 derive_seed(cfg.seed, kCvStream + it));
      const auto candidates = generate_candidates(rec.data(), space, cfg.sampler, rng);
      const double y_best = rec.data().best_y();
      std::vector<double> ei(candidates.size());
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        const auto p = model->predict(candidates[j]);
        ei[j] = expected_improvement(p.mean, p.variance, y_best);
      }
      rec.evaluate(candidates[argmax_first(ei)], std::move(iv));
    }
  } catch (const SearchComplete&) {
    logger()->info("bo seed {}: space exhausted", cfg.seed);
  }
  return rec.finish();
}

RunTrace run_random(const SearchRun& cfg) {
  cfg.validate();
  Recorder rec(cfg, {});
  Rng rng(derive_seed(cfg.seed, kCandidateStream));
  try {
    while (!rec.done()) {
      rec.evaluate(sample_unevaluated(rec.data(), cfg.benchmark->spec(), rng), std::nullopt);
    }
  } catch (const SearchComplete&) {
    logger()->info("random seed {}: space exhausted", cfg.seed);
  }
  return rec.finish();
}

RegularizedEvolution::RegularizedEvolution(SearchSpaceSpec space, int population,
                                           int tournament_size)
    : space_(std::move(space)), capacity_(population), tournament_size_(tournament_size) {
  if (capacity_ < 2) throw InvalidArgument("population must be >= 2");
  if (tournament_size_ < 1 || tournament_size_ > capacity_) {
    throw InvalidArgument("tournament size must be in [1, population]");
  }
}

ArchEncoding RegularizedEvolution::propose(const ObservationSet& data, Rng& rng) const {
  if (warming_up()) return sample_unevaluated(data, space_, rng);

  // Tournament over distinct members (partial Fisher-Yates).
  std::vector<int> order(members_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  int winner = -1;
  for (int t = 0; t < tournament_size_; ++t) {
    const int pick = t + rng.index(static_cast<int>(order.size()) - t);
    std::swap(order[t], order[pick]);
    const int m = order[t];
    if (winner < 0 || members_[m].y < members_[winner].y) winner = m;
  }
  const auto& parent = members_[winner].x;
  constexpr int kMutationTries = 32;
  for (int t = 0; t < kMutationTries; ++t) {
    ArchEncoding child = mutate_one_edge(parent, space_, rng);
    if (!data.contains(child)) return child;
  }
  return sample_unevaluated(data, space_, rng);
}

void RegularizedEvolution::observe(const ArchEncoding& x, double y) {
  members_.push_back(Observation{x, y, 0});
  if (members_.size() > static_cast<std::size_t>(capacity_)) members_.pop_front();
}

RunTrace run_rea(const SearchRun& cfg) {
  cfg.validate();
  const int tournament = std::clamp(
      static_cast<int>(std::lround(cfg.tournament_fraction * cfg.population)), 2, cfg.population);
  RegularizedEvolution rea(cfg.benchmark->spec(), cfg.population, tournament);
  Recorder rec(cfg, {});
  Rng rng(derive_seed(cfg.seed, kCandidateStream));
  try {
    while (!rec.done()) {
      const ArchEncoding x = rea.propose(rec.data(), rng);
      const double y = rec.evaluate(x, std::nullopt);
      rea.observe(x, y);
    }
  } catch (const SearchComplete&) {
    logger()->info("rea seed {}: space exhausted", cfg.seed);
  }
  return rec.finish();
}

RunTrace run_search(const SearchRun& cfg) {
  switch (cfg.strategy) {
    case Strategy::proxybo: return run_proxybo(cfg);
    case Strategy::random: return run_random(cfg);
    case Strategy::bo: return run_bo(cfg);
    case Strategy::rea: return run_rea(cfg);
  }
  throw InvalidArgument("unknown strategy");
}

}  // namespace proxybo
