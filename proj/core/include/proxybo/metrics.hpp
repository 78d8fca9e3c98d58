#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxybo/engine.hpp"

namespace proxybo {

enum class TraceMetric { best_val, best_test };

// Per-iteration mean and sample std of a best-so-far column; traces shorter
// than `budget` are an error.
struct Curve {
  std::vector<double> mean;
  std::vector<double> std;
};
Curve mean_curve(const std::vector<const RunTrace*>& traces, int budget,
                 TraceMetric metric = TraceMetric::best_test);

struct StrategyTraces {
  std::string name;
  std::vector<const RunTrace*> traces;
};

struct SpeedupEntry {
  std::string name;
  std::optional<int> evaluations;  // empty: target never reached
};

// For each strategy, the smallest evaluation count whose mean best-so-far is
// at most the reference's mean at `budget`.
std::vector<SpeedupEntry> speedup_table(const std::vector<StrategyTraces>& groups,
                                        const std::string& reference, int budget,
                                        TraceMetric metric = TraceMetric::best_test);

}  // namespace proxybo
