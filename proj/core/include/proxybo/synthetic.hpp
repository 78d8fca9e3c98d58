#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "proxybo/space.hpp"
#include "proxybo/table.hpp"

namespace proxybo {

struct SyntheticProxy {
  std::string name;
  double target_rho = 0.0;  // Spearman against the test column, in [-1, 1]
};

struct SyntheticSpec {
  SearchSpaceSpec space;
  std::vector<SyntheticProxy> proxies;
  std::uint64_t roughness_seed = 0;
  double interaction_scale = 0.5;  // weight of the pairwise term
  double noise = 0.05;             // std of val/test noise around the objective
  double tolerance = 0.05;         // allowed |rho - target|
  std::string name = "synthetic";
};

// Exhaustive table over an enumerable space. Objective = per-dimension effects
// plus a pairwise interaction term; val and test add independent noise. Each
// proxy column is a rank mixture of the test ranks (reversed for negative
// targets) and random ranks, with the mixing fraction found by bisection.
// Throws CalibrationError if 50 bisection steps do not land within tolerance.
BenchmarkTable generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace proxybo
