#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "proxybo/rng.hpp"

namespace proxybo {

// A cell-style search space: edge_count categorical dimensions, each taking
// one of ops_per_edge operations.
struct SearchSpaceSpec {
  int edge_count = 6;
  int ops_per_edge = 5;
  std::string name = "space";

  // Throws InvalidSpace unless edge_count >= 1 and ops_per_edge >= 2.
  void validate() const;
  // ops_per_edge ^ edge_count, as a double so huge spaces do not overflow.
  double size() const;

  bool operator==(const SearchSpaceSpec& o) const {
    return edge_count == o.edge_count && ops_per_edge == o.ops_per_edge;
  }
};

class ArchEncoding {
 public:
  ArchEncoding() = default;
  explicit ArchEncoding(std::vector<int> values) : values_(std::move(values)) {}

  const std::vector<int>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  int& operator[](std::size_t i) { return values_[i]; }

  bool valid_for(const SearchSpaceSpec& spec) const;

  // Canonical text form: "3,0,4,1,1,2".
  std::string to_string() const;
  // Throws InvalidArgument on malformed text.
  static ArchEncoding parse(std::string_view text);

  auto operator<=>(const ArchEncoding&) const = default;
  bool operator==(const ArchEncoding&) const = default;

 private:
  std::vector<int> values_;
};

struct ArchEncodingHash {
  std::size_t operator()(const ArchEncoding& x) const noexcept;
};

int hamming_distance(const ArchEncoding& a, const ArchEncoding& b);

// Mixed-radix rank of x in canonical lexicographic order. Requires
// spec.size() < 2^63.
std::uint64_t encoding_index(const ArchEncoding& x, const SearchSpaceSpec& spec);
ArchEncoding encoding_at(std::uint64_t index, const SearchSpaceSpec& spec);

ArchEncoding sample_uniform(const SearchSpaceSpec& spec, Rng& rng);

// Changes exactly one dimension of x to a different value.
ArchEncoding mutate_one_edge(const ArchEncoding& x, const SearchSpaceSpec& spec,
                             Rng& rng);

inline constexpr double kDefaultEnumerationCap = 1e6;

// Visits every encoding once in lexicographic order. Throws SpaceTooLarge
// when spec.size() exceeds cap.
void enumerate(const SearchSpaceSpec& spec,
               const std::function<void(const ArchEncoding&)>& visit,
               double cap = kDefaultEnumerationCap);
std::vector<ArchEncoding> enumerate_all(const SearchSpaceSpec& spec,
                                        double cap = kDefaultEnumerationCap);

}  // namespace proxybo
