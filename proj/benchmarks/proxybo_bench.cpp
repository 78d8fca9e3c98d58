#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "proxybo/proxybo.hpp"

namespace {

using namespace proxybo;

const SearchSpaceSpec kSpace{6, 5, "bench"};

ObservationSet random_observations(int n, std::uint64_t seed) {
  Rng rng(seed);
  ObservationSet d;
  while (static_cast<int>(d.size()) < n) {
    const auto x = sample_uniform(kSpace, rng);
    if (!d.contains(x)) d.add(x, rng.normal());
  }
  return d;
}

void BM_ForestFit(benchmark::State& state) {
  const auto d = random_observations(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RandomForest::fit(d, kSpace, 2));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ForestFit)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_CrossValidation(benchmark::State& state) {
  const auto d = random_observations(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cv_predict(d, kSpace, 5, 3, ForestOptions{}));
  }
}
BENCHMARK(BM_CrossValidation)->Arg(50)->Arg(200);

void BM_ProxyScore(benchmark::State& state) {
  ProxyContext ctx;
  ctx.space = kSpace;
  const auto proxy = make_formula_proxy(static_cast<ProxyKind>(state.range(0)), ctx);
  Rng rng(4);
  std::vector<ArchEncoding> xs;
  for (int i = 0; i < 64; ++i) xs.push_back(sample_uniform(kSpace, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(proxy->score(xs[i++ % xs.size()]));
  }
  state.SetLabel(proxy->name());
}
BENCHMARK(BM_ProxyScore)
    ->Arg(static_cast<int>(ProxyKind::snip))
    ->Arg(static_cast<int>(ProxyKind::synflow))
    ->Arg(static_cast<int>(ProxyKind::jacob_cov));

void BM_SampleNext(benchmark::State& state) {
  SyntheticSpec spec;
  spec.space = kSpace;
  spec.proxies = {{"a", 0.7}, {"b", 0.3}, {"c", -0.4}};
  const auto table = std::make_shared<const BenchmarkTable>(generate_synthetic(spec, 5));
  std::vector<ProxyPtr> proxies;
  for (const auto& n : table->proxy_names()) {
    proxies.push_back(std::make_shared<CachingScorer>(make_tabular_proxy(table, n)));
  }
  const auto d = random_observations(static_cast<int>(state.range(0)), 6);
  const SamplerOptions options;
  const auto model = RandomForest::fit(d, kSpace, 7);
  Rng rng(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_next(d, static_cast<int>(d.size()) + 1, &model, proxies, kSpace, options, rng, 9));
  }
}
BENCHMARK(BM_SampleNext)->Arg(50)->Arg(200);

}  // namespace
BENCHMARK_MAIN();
