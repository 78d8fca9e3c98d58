#pragma once

#include <cstdint>
#include <filesystem>

#include "proxybo/synthetic.hpp"

namespace proxybo::cli {

struct SyntheticFile {
  SyntheticSpec spec;
  std::uint64_t seed = 0;
};

// JSON object with keys name, edges, ops, seed, roughness_seed,
// interaction_scale, noise, tolerance and proxies: [{"name": .., "rho": ..}].
// Missing keys keep their defaults. Throws InvalidArgument naming the key.
SyntheticFile load_synthetic_file(const std::filesystem::path& path);

}  // namespace proxybo::cli
