#include "proxybo/space.hpp"

#include <charconv>
#include <cmath>

#include "proxybo/error.hpp"

namespace proxybo {

void SearchSpaceSpec::validate() const {
  if (edge_count < 1) {
    throw InvalidSpace("edge_count must be >= 1, got " + std::to_string(edge_count));
  }
  if (ops_per_edge < 2) {
    throw InvalidSpace("ops_per_edge must be >= 2, got " + std::to_string(ops_per_edge));
  }
}

double SearchSpaceSpec::size() const {
  return std::pow(static_cast<double>(ops_per_edge), edge_count);
}

bool ArchEncoding::valid_for(const SearchSpaceSpec& spec) const {
  if (values_.size() != static_cast<std::size_t>(spec.edge_count)) return false;
  for (int v : values_) {
    if (v < 0 || v >= spec.ops_per_edge) return false;
  }
  return true;
}

std::string ArchEncoding::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(values_[i]);
  }
  return out;
}

ArchEncoding ArchEncoding::parse(std::string_view text) {
  std::vector<int> values;
  const char* p = text.data();
  const char* end = p + text.size();
  if (p == end) throw InvalidArgument("empty encoding");
  while (true) {
    int v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == p) {
      throw InvalidArgument("malformed encoding '" + std::string(text) + "'");
    }
    values.push_back(v);
    p = next;
    if (p == end) break;
    if (*p != ',') throw InvalidArgument("malformed encoding '" + std::string(text) + "'");
    ++p;
  }
  return ArchEncoding(std::move(values));
}

std::size_t ArchEncodingHash::operator()(const ArchEncoding& x) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (int v : x.values()) {
    h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

int hamming_distance(const ArchEncoding& a, const ArchEncoding& b) {
  if (a.size() != b.size()) throw InvalidArgument("encodings differ in length");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::uint64_t encoding_index(const ArchEncoding& x, const SearchSpaceSpec& spec) {
  std::uint64_t index = 0;
  for (int v : x.values()) index = index * static_cast<std::uint64_t>(spec.ops_per_edge) + v;
  return index;
}

ArchEncoding encoding_at(std::uint64_t index, const SearchSpaceSpec& spec) {
  std::vector<int> values(spec.edge_count);
  for (int i = spec.edge_count - 1; i >= 0; --i) {
    values[i] = static_cast<int>(index % static_cast<std::uint64_t>(spec.ops_per_edge));
    index /= static_cast<std::uint64_t>(spec.ops_per_edge);
  }
  return ArchEncoding(std::move(values));
}

ArchEncoding sample_uniform(const SearchSpaceSpec& spec, Rng& rng) {
  std::vector<int> values(spec.edge_count);
  for (int& v : values) v = rng.index(spec.ops_per_edge);
  return ArchEncoding(std::move(values));
}

ArchEncoding mutate_one_edge(const ArchEncoding& x, const SearchSpaceSpec& spec,
                             Rng& rng) {
  if (spec.ops_per_edge < 2) {
    throw InvalidSpace("no legal mutation with ops_per_edge < 2");
  }
  ArchEncoding out = x;
  const int dim = rng.index(spec.edge_count);
  // Draw from the ops_per_edge - 1 other values.
  int v = rng.index(spec.ops_per_edge - 1);
  if (v >= x[dim]) ++v;
  out[dim] = v;
  return out;
}

void enumerate(const SearchSpaceSpec& spec,
               const std::function<void(const ArchEncoding&)>& visit, double cap) {
  spec.validate();
  if (spec.size() > cap) throw SpaceTooLarge(spec.size(), cap);
  ArchEncoding x(std::vector<int>(spec.edge_count, 0));
  while (true) {
    visit(x);
    int i = spec.edge_count - 1;
    while (i >= 0 && x[i] == spec.ops_per_edge - 1) {
      x[i] = 0;
      --i;
    }
    if (i < 0) return;
    ++x[i];
  }
}

std::vector<ArchEncoding> enumerate_all(const SearchSpaceSpec& spec, double cap) {
  std::vector<ArchEncoding> out;
  enumerate(spec, [&](const ArchEncoding& x) { out.push_back(x); }, cap);
  return out;
}

}  // namespace proxybo
