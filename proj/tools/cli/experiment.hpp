#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxybo/proxybo.hpp"

namespace proxybo::cli {

// Where the benchmark comes from: a table file or a synthetic spec file.
struct BenchmarkSource {
  std::filesystem::path table;
  std::filesystem::path synthetic;
};

std::shared_ptr<const BenchmarkTable> load_benchmark(const BenchmarkSource& source);

// Parsed --proxies value: "none", or a comma list of snip, synflow,
// jacob_cov and tabular:<column>.
// Entries keep the order given.
struct ProxySelection {
  struct Entry {
    ProxyKind kind = ProxyKind::snip;
    std::string column;  // tabular only

    bool operator==(const Entry&) const = default;
  };
  std::vector<Entry> entries;

  static ProxySelection parse(std::string_view text);
  bool empty() const { return entries.empty(); }
};

std::vector<ProxyPtr> build_proxies(const ProxySelection& selection,
                                    std::shared_ptr<const BenchmarkTable> table,
                                    const ProxyContext& formula_context);

struct ExperimentConfig {
  BenchmarkSource source;
  std::vector<Strategy> strategies{Strategy::proxybo};
  int budget = 200;
  int reps = 30;
  std::uint64_t seed_base = 0;
  double tau0 = 0.05;
  int q = 500;
  std::string proxies = "snip,synflow,jacob_cov";
  LogBase log_base = LogBase::natural;
  int jobs = 1;
  std::filesystem::path out = "results";
  // Strategy whose full-budget mean the speedup report targets. Empty picks
  // rea when present, else the first strategy.
  std::string reference;

  // Throws InvalidArgument naming the offending field.
  void validate() const;
  std::string resolved_reference() const;
};

struct RunOutcome {
  Strategy strategy = Strategy::proxybo;
  std::uint64_t seed = 0;
  std::optional<RunTrace> trace;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunOutcome> runs;
  std::size_t failures = 0;
};

// Runs reps x strategies searches on up to `jobs` threads. Each finished run
// is written to <out>/traces/<strategy>_seed<seed>.csv; summary.csv and
// speedup.csv follow once every run has ended. Failed runs are recorded and
// do not stop the others.
ExperimentResult run_experiment(const ExperimentConfig& config);

// --- artifacts ---

std::string trace_file_name(Strategy strategy, std::uint64_t seed);

// iter,encoding,val,test,best_val,best_test,cost,G_M,I_M,{G_<p>,I_<p>}...
// Metrics are written in the table's own orientation.
void write_trace_csv(std::ostream& out, const RunTrace& trace, const BenchmarkTable& table);

// Per strategy and iteration: mean and sample std of best_test and best_val
// across completed runs.
void write_summary_csv(std::ostream& out, const ExperimentResult& result,
                       const ExperimentConfig& config, const BenchmarkTable& table);

void write_speedup_csv(std::ostream& out, const ExperimentResult& result,
                       const ExperimentConfig& config);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// --- score ---

struct ScoreConfig {
  BenchmarkSource source;
  std::string proxies = "snip,synflow,jacob_cov";
  int sample_n = 1000;
  std::uint64_t seed = 0;
};

struct ScoreRow {
  std::string proxy;
  std::size_t n = 0;
  std::optional<double> spearman;
  std::optional<double> spearman_top10;
};

// Spearman between proxy scores and the test objective (both lower-is-better)
// on sample_n records drawn without replacement, or all when fewer exist.
std::vector<ScoreRow> score_report(const ScoreConfig& config);
void write_score_csv(std::ostream& out, const std::vector<ScoreRow>& rows);

// --- trace-influence ---

struct InfluenceRow {
  int iteration = 0;
  std::size_t runs = 0;
  std::vector<double> g;  // surrogate first, then proxies
  std::vector<double> weights;
};

struct InfluenceReport {
  std::vector<std::string> proxy_names;
  std::vector<InfluenceRow> rows;
  // First iteration where the surrogate's mean G exceeds every proxy's.
  std::optional<int> crossover;
};

// Mean G and influence per iteration across the given trace files. Throws
// InvalidArgument when no file carries guidance or proxy columns differ.
InfluenceReport influence_report(const std::vector<std::filesystem::path>& traces);
void write_influence_csv(std::ostream& out, const InfluenceReport& report);

}  // namespace proxybo::cli
