#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxybo/guidance.hpp"
#include "proxybo/proxies.hpp"
#include "proxybo/table.hpp"

namespace proxybo {

enum class Strategy { proxybo, random, bo, rea };

const char* to_string(Strategy s);
// Throws InvalidArgument on unknown names.
Strategy parse_strategy(std::string_view name);

struct SearchRun {
  Strategy strategy = Strategy::proxybo;
  int budget = 200;
  std::uint64_t seed = 0;
  const BenchmarkTable* benchmark = nullptr;
  std::vector<ProxyPtr> proxies;  // used by proxybo only
  SamplerOptions sampler;         // q, tau0, ...
  int population = 20;            // REA
  double tournament_fraction = 0.1;

  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

// Metric columns are oriented for minimisation (see BenchmarkTable::sign).
struct TraceRecord {
  int iteration = 0;
  ArchEncoding x;
  double val = 0.0;
  double test = 0.0;
  double best_val = 0.0;   // best validation so far
  double best_test = 0.0;  // test metric of that validation incumbent
  double cost = 0.0;       // cumulative simulated training seconds
  std::optional<InfluenceVector> guidance;
};

struct RunTrace {
  Strategy strategy = Strategy::proxybo;
  std::uint64_t seed = 0;
  std::vector<std::string> proxy_names;
  std::vector<TraceRecord> records;
  std::size_t best_index = 0;  // record holding the best validation value

  bool operator==(const RunTrace& o) const;
};

// Aging evolution: a fixed-size population where each step mutates the
// winner of a random tournament and the oldest member is evicted.
class RegularizedEvolution {
 public:
  RegularizedEvolution(SearchSpaceSpec space, int population, int tournament_size);

  // Random unevaluated encodings until the population is full, then a
  // single-edit mutation of the tournament winner. Children already in
  // `data` are re-drawn; if that keeps failing a random unevaluated
  // encoding is used.
  ArchEncoding propose(const ObservationSet& data, Rng& rng) const;
  void observe(const ArchEncoding& x, double y);

  const std::deque<Observation>& population() const { return members_; }
  bool warming_up() const { return members_.size() < static_cast<std::size_t>(capacity_); }

 private:
  SearchSpaceSpec space_;
  int capacity_;
  int tournament_size_;
  std::deque<Observation> members_;
};

RunTrace run_proxybo(const SearchRun& cfg);
RunTrace run_bo(const SearchRun& cfg);
RunTrace run_random(const SearchRun& cfg);
RunTrace run_rea(const SearchRun& cfg);
RunTrace run_search(const SearchRun& cfg);

}  // namespace proxybo
