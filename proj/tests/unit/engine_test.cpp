#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "proxybo/engine.hpp"
#include "proxybo/error.hpp"
#include "proxybo/stats.hpp"
#include "proxybo/synthetic.hpp"

using namespace proxybo;

namespace {

// Exhaustive table with val = test = f(x) and a proxy column equal to g(x).
BenchmarkTable make_table(const SearchSpaceSpec& space, double (*f)(const ArchEncoding&),
                          double (*g)(const ArchEncoding&) = nullptr) {
  std::vector<std::string> names;
  if (g) names.push_back("zc");
  BenchmarkTable t(space, TableMeta{space.name, true, 0.0}, names);
  for (const auto& x : enumerate_all(space)) {
    TableRecord r{x, f(x), f(x), 100.0 + x[0], {}};
    if (g) r.proxies.push_back(g(x));
    t.add(std::move(r));
  }
  t.mutable_meta().optimum_test = t.best_objective_test();
  return t;
}

double bumpy(const ArchEncoding& x) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) s += std::sin(2.1 * x[d] + 0.7 * d) + 0.01 * x[d] * d;
  return s;
}

// Lower total encoding value is better; the small term breaks ties.
double monotone(const ArchEncoding& x) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) s += x[d] + 1e-3 * x[d] * static_cast<double>(d);
  return s;
}

SearchRun config(const BenchmarkTable& t, Strategy s, int budget, std::uint64_t seed) {
  SearchRun r;
  r.strategy = s;
  r.budget = budget;
  r.seed = seed;
  r.benchmark = &t;
  return r;
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (auto s : {Strategy::proxybo, Strategy::random, Strategy::bo, Strategy::rea}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK(parse_strategy("rs") == Strategy::random);
  CHECK_THROWS_AS(parse_strategy("grid"), InvalidArgument);
}

TEST_CASE("run configuration is validated") {
  const auto t = make_table({2, 2, "t"}, bumpy);
  SearchRun r;
  CHECK_THROWS_AS(r.validate(), InvalidArgument);
  r = config(t, Strategy::bo, 0, 0);
  CHECK_THROWS_AS(run_search(r), InvalidArgument);
  r = config(t, Strategy::proxybo, 3, 0);
  r.sampler.tau0 = 0.0;
  CHECK_THROWS_AS(run_search(r), InvalidArgument);
}

TEST_CASE("a budget of five is pure cold start") {
  const auto t = make_table({6, 5, "nb"}, bumpy, monotone);
  auto table = std::make_shared<BenchmarkTable>(t);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto cfg = config(*table, Strategy::proxybo, 5, seed);
    cfg.proxies = {make_tabular_proxy(table, "zc")};
    const auto pb = run_search(cfg);
    const auto rs = run_search(config(*table, Strategy::random, 5, seed));
    REQUIRE(pb.records.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK_FALSE(pb.records[i].guidance.has_value());
      CHECK(pb.records[i].x == rs.records[i].x);
    }
  }
}

TEST_CASE("ProxyBO without proxies reproduces BO") {
  const auto t = make_table({6, 5, "nb"}, bumpy);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto pb = run_search(config(t, Strategy::proxybo, 25, seed));
    auto bo = run_search(config(t, Strategy::bo, 25, seed));
    CHECK(bo.records[10].guidance.has_value());
    bo.strategy = Strategy::proxybo;
    CHECK(pb == bo);
  }
}

TEST_CASE("runs replay bit-identically") {
  const auto t = make_table({6, 5, "nb"}, bumpy, monotone);
  auto table = std::make_shared<BenchmarkTable>(t);
  for (auto s : {Strategy::proxybo, Strategy::bo, Strategy::random, Strategy::rea}) {
    auto cfg = config(*table, s, 30, 7);
    if (s == Strategy::proxybo) cfg.proxies = {make_tabular_proxy(table, "zc")};
    CHECK(run_search(cfg) == run_search(cfg));
  }
}

TEST_CASE("traces are consistent") {
  const auto t = make_table({6, 5, "nb"}, bumpy, monotone);
  auto table = std::make_shared<BenchmarkTable>(t);
  for (auto s : {Strategy::proxybo, Strategy::bo, Strategy::random, Strategy::rea}) {
    auto cfg = config(*table, s, 40, 3);
    if (s == Strategy::proxybo) cfg.proxies = {make_tabular_proxy(table, "zc")};
    const auto tr = run_search(cfg);
    REQUIRE(tr.records.size() == 40);
    std::set<ArchEncoding> seen;
    double cost = 0.0;
    double best = INFINITY;
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
      const auto& r = tr.records[i];
      CHECK(r.iteration == static_cast<int>(i) + 1);
      CHECK(seen.insert(r.x).second);
      cost += table->at(r.x).cost;
      CHECK(r.cost == doctest::Approx(cost));
      CHECK(r.val == table->at(r.x).val);
      if (i > 0) CHECK(r.best_val <= tr.records[i - 1].best_val);
      best = std::min(best, r.val);
      CHECK(r.best_val == best);
    }
    CHECK(tr.records[tr.best_index].val == best);
    CHECK(tr.records[tr.best_index].best_test == tr.records[tr.best_index].test);
  }
}

TEST_CASE("every strategy finds the optimum of a 27-encoding space") {
  const auto t = make_table({3, 3, "s33"}, bumpy, monotone);
  auto table = std::make_shared<BenchmarkTable>(t);
  for (auto s : {Strategy::proxybo, Strategy::bo, Strategy::random, Strategy::rea}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto cfg = config(*table, s, 27, seed);
      cfg.population = 5;
      if (s == Strategy::proxybo) cfg.proxies = {make_tabular_proxy(table, "zc")};
      const auto tr = run_search(cfg);
      CHECK(tr.records.size() == 27);
      CHECK(tr.records.back().best_val == table->best_objective_val());
    }
  }
}

TEST_CASE("a run stops when the space is exhausted") {
  const auto t = make_table({2, 2, "t"}, bumpy);
  for (auto s : {Strategy::proxybo, Strategy::random, Strategy::rea}) {
    auto cfg = config(t, s, 10, 1);
    cfg.population = 2;
    CHECK(run_search(cfg).records.size() == 4);
  }
}

TEST_CASE("missing encodings abort with context") {
  BenchmarkTable partial({2, 3, "p"}, TableMeta{});
  partial.add({ArchEncoding({0, 0}), 1.0, 1.0, 1.0, {}});
  try {
    run_search(config(partial, Strategy::random, 3, 0));
    FAIL("expected LookupError");
  } catch (const LookupError& e) {
    CHECK(std::string(e.what()).find("random run") != std::string::npos);
  }
}

TEST_CASE("random search's first pick is uniform over the table") {
  const auto t = make_table({2, 2, "t"}, bumpy);
  std::vector<int> counts(4, 0);
  const int n = 4000;
  for (int s = 0; s < n; ++s) {
    const auto tr = run_search(config(t, Strategy::random, 1, static_cast<std::uint64_t>(s)));
    ++counts[encoding_index(tr.records[0].x, t.spec())];
  }
  for (int c : counts) CHECK(std::abs(c / static_cast<double>(n) - 0.25) < 0.03);
}

TEST_CASE("REA warms up with random encodings and keeps a fixed population") {
  const auto t = make_table({6, 5, "nb"}, monotone);
  const auto rea = run_search(config(t, Strategy::rea, 60, 4));
  const auto rs = run_search(config(t, Strategy::random, 20, 4));
  for (int i = 0; i < 20; ++i) CHECK(rea.records[i].x == rs.records[i].x);

  RegularizedEvolution evo(t.spec(), 20, 2);
  ObservationSet d;
  Rng rng(1);
  for (int i = 0; i < 60; ++i) {
    const auto x = evo.propose(d, rng);
    CHECK_FALSE(d.contains(x));
    const double y = monotone(x);
    d.add(x, y);
    evo.observe(x, y);
    CHECK(evo.population().size() == static_cast<std::size_t>(std::min(i + 1, 20)));
    if (i >= 20) {
      // The newest member is a single-edit child of an earlier observation.
      bool child = false;
      for (std::size_t j = 0; j + 1 < d.size(); ++j) child |= hamming_distance(d[j].x, x) == 1;
      CHECK(child);
    }
  }
  // Aging: the population holds exactly the 20 most recent evaluations.
  for (std::size_t i = 0; i < 20; ++i) CHECK(evo.population()[i].x == d[40 + i].x);
  CHECK_THROWS_AS(RegularizedEvolution(t.spec(), 20, 21), InvalidArgument);
}

TEST_CASE("REA beats random search on a monotone objective") {
  const auto t = make_table({6, 5, "nb"}, monotone);
  std::vector<double> rea, rs;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    rea.push_back(run_search(config(t, Strategy::rea, 100, seed)).records.back().best_val);
    rs.push_back(run_search(config(t, Strategy::random, 100, seed)).records.back().best_val);
  }
  CHECK(median(rea) < median(rs));
}

TEST_CASE("a perfect proxy speeds up ProxyBO") {
  SyntheticSpec s;
  s.space = {6, 5, "nb"};
  s.proxies = {{"perfect", 1.0}};
  auto table = std::make_shared<BenchmarkTable>(generate_synthetic(s, 3));
  double pb = 0.0, bo = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto cfg = config(*table, Strategy::proxybo, 20, seed);
    cfg.proxies = {make_tabular_proxy(table, "perfect")};
    pb += run_search(cfg).records.back().best_test;
    bo += run_search(config(*table, Strategy::bo, 20, seed)).records.back().best_test;
  }
  CHECK(pb < bo);
}
