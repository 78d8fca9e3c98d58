#include "proxybo/metrics.hpp"

#include "proxybo/error.hpp"
#include "proxybo/stats.hpp"

namespace proxybo {

Curve mean_curve(const std::vector<const RunTrace*>& traces, int budget, TraceMetric metric) {
  if (traces.empty()) throw InvalidArgument("mean_curve: no traces");
  Curve c;
  std::vector<double> column(traces.size());
  for (int i = 0; i < budget; ++i) {
    for (std::size_t t = 0; t < traces.size(); ++t) {
      const auto& recs = traces[t]->records;
      if (recs.size() < static_cast<std::size_t>(budget)) {
        throw InvalidArgument("mean_curve: trace has " + std::to_string(recs.size()) +
                              " records, budget is " + std::to_string(budget));
      }
      column[t] = metric == TraceMetric::best_val ? recs[i].best_val : recs[i].best_test;
    }
    c.mean.push_back(mean(column));
    c.std.push_back(stddev(column));
  }
  return c;
}

std::vector<SpeedupEntry> speedup_table(const std::vector<StrategyTraces>& groups,
                                        const std::string& reference, int budget,
                                        TraceMetric metric) {
  const StrategyTraces* ref = nullptr;
  for (const auto& g : groups) {
    if (g.traces.empty()) throw InvalidArgument("speedup: strategy '" + g.name + "' has no traces");
    if (g.name == reference) ref = &g;
  }
  if (!ref) throw InvalidArgument("speedup: reference strategy '" + reference + "' not present");
  const double target = mean_curve(ref->traces, budget, metric).mean.back();
  std::vector<SpeedupEntry> out;
  for (const auto& g : groups) {
    const auto curve = mean_curve(g.traces, budget, metric);
    SpeedupEntry e{g.name, std::nullopt};
    for (int i = 0; i < budget; ++i) {
      if (curve.mean[i] <= target) {
        e.evaluations = i + 1;
        break;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace proxybo
