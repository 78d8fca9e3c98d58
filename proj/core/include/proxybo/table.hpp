#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "proxybo/space.hpp"

namespace proxybo {

struct TableRecord {
  ArchEncoding x;
  double val = 0.0;
  double test = 0.0;
  double cost = 0.0;  // simulated training seconds
  // Aligned with BenchmarkTable::proxy_names(); lower is better.
  std::vector<std::optional<double>> proxies;
};

struct TableMeta {
  std::string name = "table";
  bool minimize = true;
  double optimum_test = 0.0;
};

// Maps encodings to trained metrics, simulated cost and optional precomputed
// proxy scores. Immutable once built; safe to share across threads.
//
// Text format, one record per line:
//   #space edges=<n> ops=<m>
//   #meta name=<s> minimize=<0|1> optimum_test=<f>
//   <encoding>;<val>;<test>;<cost>[;proxy:<name>=<f>]*
// Other lines starting with '#' and blank lines are ignored.
class BenchmarkTable {
 public:
  BenchmarkTable(SearchSpaceSpec spec, TableMeta meta,
                 std::vector<std::string> proxy_names = {});

  // Validates and appends. Throws InvalidArgument on invalid encodings,
  // non-finite metrics, duplicates or misaligned proxy columns.
  void add(TableRecord record);

  const SearchSpaceSpec& spec() const { return spec_; }
  const TableMeta& meta() const { return meta_; }
  TableMeta& mutable_meta() { return meta_; }
  const std::vector<std::string>& proxy_names() const { return proxy_names_; }
  std::optional<std::size_t> proxy_column(const std::string& name) const;

  const std::vector<TableRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool exhaustive() const;

  const TableRecord* find(const ArchEncoding& x) const;
  // Throws LookupError when x is absent.
  const TableRecord& at(const ArchEncoding& x) const;

  // Metrics oriented for minimisation (negated when meta().minimize is false).
  double objective_val(const TableRecord& r) const { return sign() * r.val; }
  double objective_test(const TableRecord& r) const { return sign() * r.test; }
  double sign() const { return meta_.minimize ? 1.0 : -1.0; }

  // Best oriented validation objective over all records.
  double best_objective_val() const;
  double best_objective_test() const;

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  // Throws ParseError naming line and field.
  static BenchmarkTable load(std::istream& in);
  static BenchmarkTable load(const std::filesystem::path& path);

  bool operator==(const BenchmarkTable& o) const;

 private:
  SearchSpaceSpec spec_;
  TableMeta meta_;
  std::vector<std::string> proxy_names_;
  std::vector<TableRecord> records_;
  std::unordered_map<ArchEncoding, std::size_t, ArchEncodingHash> index_;
};

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
// Whole-string decimal parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);

}  // namespace proxybo
