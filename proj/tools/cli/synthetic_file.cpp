#include "synthetic_file.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "proxybo/error.hpp"

namespace proxybo::cli {

namespace {

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("synthetic spec: key '") + key + "': " + e.what());
  }
}

}  // namespace

SyntheticFile load_synthetic_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("synthetic spec: cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("synthetic spec '" + path.string() + "': " + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("synthetic spec: expected a JSON object");

  SyntheticFile f;
  f.spec.space = {6, 5, "synthetic"};
  read_key(j, "name", f.spec.name);
  f.spec.space.name = f.spec.name;
  read_key(j, "edges", f.spec.space.edge_count);
  read_key(j, "ops", f.spec.space.ops_per_edge);
  read_key(j, "seed", f.seed);
  read_key(j, "roughness_seed", f.spec.roughness_seed);
  read_key(j, "interaction_scale", f.spec.interaction_scale);
  read_key(j, "noise", f.spec.noise);
  read_key(j, "tolerance", f.spec.tolerance);
  if (j.contains("proxies")) {
    const auto& list = j.at("proxies");
    if (!list.is_array()) throw InvalidArgument("synthetic spec: key 'proxies' must be an array");
    for (const auto& p : list) {
      SyntheticProxy proxy;
      read_key(p, "name", proxy.name);
      read_key(p, "rho", proxy.target_rho);
      if (proxy.name.empty()) throw InvalidArgument("synthetic spec: proxy without 'name'");
      f.spec.proxies.push_back(std::move(proxy));
    }
  }
  for (const auto& [key, value] : j.items()) {
    static const char* known[] = {"name", "edges", "ops", "seed", "roughness_seed",
                                  "interaction_scale", "noise", "tolerance", "proxies"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw InvalidArgument("synthetic spec: unknown key '" + key + "'");
    }
  }
  return f;
}

}  // namespace proxybo::cli
