#include "proxybo/synthetic.hpp"

#include <cmath>

#include "proxybo/error.hpp"
#include "proxybo/rng.hpp"
#include "proxybo/stats.hpp"

namespace proxybo {

namespace {

constexpr int kMaxBisection = 50;
constexpr double kBaseMetric = 10.0;

// Proxy values that keep the base value where keep_draw < fraction and use a
// random value elsewhere.
std::vector<double> mix(const std::vector<double>& base, const std::vector<double>& keep_draw,
                        const std::vector<double>& random_value, double fraction) {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    out[i] = keep_draw[i] < fraction ? base[i] : random_value[i];
  }
  return out;
}

}  // namespace

BenchmarkTable generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.space.validate();
  for (const auto& p : spec.proxies) {
    if (!(p.target_rho >= -1.0 && p.target_rho <= 1.0)) {
      throw InvalidArgument("proxy '" + p.name + "': target rho must be in [-1, 1]");
    }
  }
  const auto all = enumerate_all(spec.space);
  const int edges = spec.space.edge_count;
  const int ops = spec.space.ops_per_edge;

  // Objective: additive per-dimension effects plus pairwise interactions.
  Rng shape(derive_seed(spec.roughness_seed, 1));
  std::vector<std::vector<double>> main(edges, std::vector<double>(ops));
  for (auto& row : main) {
    for (double& v : row) v = shape.normal();
  }
  const int pairs = edges * (edges - 1) / 2;
  std::vector<std::vector<double>> inter(static_cast<std::size_t>(pairs),
                                         std::vector<double>(static_cast<std::size_t>(ops * ops)));
  for (auto& table : inter) {
    for (double& v : table) v = shape.normal();
  }
  const double inter_weight =
      pairs > 0 ? spec.interaction_scale * std::sqrt(static_cast<double>(edges) / pairs) : 0.0;

  std::vector<double> f(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& x = all[i];
    double s = 0.0;
    int pair = 0;
    for (int d = 0; d < edges; ++d) {
      s += main[d][x[d]];
      for (int e = d + 1; e < edges; ++e, ++pair) s += inter_weight * inter[pair][x[d] * ops + x[e]];
    }
    f[i] = s;
  }
  const double fm = mean(f);
  const double fs = stddev(f);
  for (double& v : f) v = fs > 0.0 ? (v - fm) / fs : 0.0;

  Rng noise(derive_seed(seed, 2));
  std::vector<double> val(all.size()), test(all.size()), cost(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    val[i] = kBaseMetric + f[i] + spec.noise * noise.normal();
    test[i] = kBaseMetric + f[i] + spec.noise * noise.normal();
    double size = 0.0;
    for (int v : all[i].values()) size += static_cast<double>(v) / (ops - 1);
    cost[i] = 1000.0 * (1.0 + size / edges);
  }

  // Proxy columns, calibrated against the test column.
  const auto test_rank = average_ranks(test);
  const double denom = static_cast<double>(all.size() > 1 ? all.size() - 1 : 1);
  std::vector<std::vector<double>> columns;
  for (std::size_t p = 0; p < spec.proxies.size(); ++p) {
    const double target = spec.proxies[p].target_rho;
    const double sign = target < 0 ? -1.0 : 1.0;
    std::vector<double> base(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      const double u = (test_rank[i] - 1.0) / denom;
      base[i] = sign > 0 ? u : 1.0 - u;
    }
    Rng draw(derive_seed(seed, 100 + p));
    std::vector<double> keep(all.size()), rnd(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      keep[i] = draw.uniform();
      rnd[i] = draw.uniform();
    }
    const double goal = std::abs(target);
    auto realized = [&](double fraction) {
      return sign * spearman(mix(base, keep, rnd, fraction), test);
    };
    double lo = 0.0, hi = 1.0, fraction = goal;
    double achieved = 0.0;
    if (goal >= 1.0) {
      fraction = 1.0;
      achieved = realized(fraction);
    } else {
      for (int step = 0; step < kMaxBisection; ++step) {
        fraction = 0.5 * (lo + hi);
        achieved = realized(fraction);
        if (std::abs(achieved - goal) <= 0.1 * spec.tolerance) break;
        (achieved < goal ? lo : hi) = fraction;
      }
    }
    if (std::abs(sign * achieved - target) > spec.tolerance) {
      throw CalibrationError(target, sign * achieved);
    }
    columns.push_back(mix(base, keep, rnd, fraction));
  }

  std::vector<std::string> names;
  for (const auto& p : spec.proxies) names.push_back(p.name);
  TableMeta meta{spec.name, true, 0.0};
  BenchmarkTable table(spec.space, meta, names);
  double optimum = test.empty() ? 0.0 : test[0];
  for (std::size_t i = 0; i < all.size(); ++i) {
    TableRecord r{all[i], val[i], test[i], cost[i], {}};
    for (const auto& c : columns) r.proxies.emplace_back(c[i]);
    optimum = std::min(optimum, test[i]);
    table.add(std::move(r));
  }
  table.mutable_meta().optimum_test = optimum;
  return table;
}

}  // namespace proxybo
