#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "proxybo/error.hpp"
#include "proxybo/log.hpp"
#include "synthetic_file.hpp"
#include "trace_csv.hpp"

namespace proxybo::cli {

std::shared_ptr<const BenchmarkTable> load_benchmark(const BenchmarkSource& source) {
  const bool has_table = !source.table.empty();
  const bool has_synthetic = !source.synthetic.empty();
  if (has_table == has_synthetic) {
    throw InvalidArgument("benchmark: give exactly one of --benchmark or --synthetic");
  }
  if (has_table) return std::make_shared<BenchmarkTable>(BenchmarkTable::load(source.table));
  const auto f = load_synthetic_file(source.synthetic);
  return std::make_shared<BenchmarkTable>(generate_synthetic(f.spec, f.seed));
}

ProxySelection ProxySelection::parse(std::string_view text) {
  ProxySelection sel;
  if (text == "none") return sel;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string_view tok = text.substr(start, end - start);
    if (tok == "snip") {
      sel.entries.push_back({ProxyKind::snip, {}});
    } else if (tok == "synflow") {
      sel.entries.push_back({ProxyKind::synflow, {}});
    } else if (tok == "jacob_cov") {
      sel.entries.push_back({ProxyKind::jacob_cov, {}});
    } else if (tok.starts_with("tabular:") && tok.size() > 8) {
      sel.entries.push_back({ProxyKind::tabular, std::string(tok.substr(8))});
    } else {
      throw InvalidArgument("proxies: unknown entry '" + std::string(tok) + "'");
    }
    start = end + 1;
  }
  return sel;
}

std::vector<ProxyPtr> build_proxies(const ProxySelection& selection,
                                    std::shared_ptr<const BenchmarkTable> table,
                                    const ProxyContext& formula_context) {
  std::vector<ProxyPtr> out;
  for (const auto& e : selection.entries) {
    out.push_back(e.kind == ProxyKind::tabular ? make_tabular_proxy(table, e.column)
                                               : make_formula_proxy(e.kind, formula_context));
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (strategies.empty()) throw InvalidArgument("strategy: at least one strategy is required");
  if (budget < 1) throw InvalidArgument("budget: must be >= 1");
  if (reps < 1) throw InvalidArgument("reps: must be >= 1");
  if (!(tau0 > 0.0)) throw InvalidArgument("tau0: must be > 0");
  if (q < 1) throw InvalidArgument("q: must be >= 1");
  if (jobs < 1) throw InvalidArgument("jobs: must be >= 1");
  if (out.empty()) throw InvalidArgument("out: output directory is required");
  ProxySelection::parse(proxies);
  if (!reference.empty()) {
    const Strategy r = parse_strategy(reference);
    if (std::find(strategies.begin(), strategies.end(), r) == strategies.end()) {
      throw InvalidArgument("reference: '" + reference + "' is not among the strategies");
    }
  }
}

std::string ExperimentConfig::resolved_reference() const {
  if (!reference.empty()) return to_string(parse_strategy(reference));
  for (auto s : strategies) {
    if (s == Strategy::rea) return to_string(s);
  }
  return to_string(strategies.front());
}

std::string trace_file_name(Strategy strategy, std::uint64_t seed) {
  return std::string(to_string(strategy)) + "_seed" + std::to_string(seed) + ".csv";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_trace_csv(std::ostream& out, const RunTrace& trace, const BenchmarkTable& table) {
  const double s = table.sign();
  out << "iter,encoding,val,test,best_val,best_test,cost,G_M,I_M";
  for (const auto& n : trace.proxy_names) out << ",G_" << n << ",I_" << n;
  out << '\n';
  const std::size_t components = trace.proxy_names.size() + 1;
  for (const auto& r : trace.records) {
    out << r.iteration << ",\"" << r.x.to_string() << "\"," << format_double(s * r.val) << ','
        << format_double(s * r.test) << ',' << format_double(s * r.best_val) << ','
        << format_double(s * r.best_test) << ',' << format_double(r.cost);
    for (std::size_t c = 0; c < components; ++c) {
      if (r.guidance && c < r.guidance->g.size()) {
        out << ',' << format_double(r.guidance->g[c]) << ','
            << format_double(r.guidance->weights[c]);
      } else {
        out << ",,";
      }
    }
    out << '\n';
  }
}

namespace {

// Completed traces per strategy, in configuration order.
std::vector<StrategyTraces> group(const ExperimentResult& result, const ExperimentConfig& config) {
  std::vector<StrategyTraces> groups;
  for (auto s : config.strategies) {
    StrategyTraces g{to_string(s), {}};
    for (const auto& run : result.runs) {
      if (run.strategy == s && run.trace) g.traces.push_back(&*run.trace);
    }
    if (!g.traces.empty()) groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace

void write_summary_csv(std::ostream& out, const ExperimentResult& result,
                       const ExperimentConfig& config, const BenchmarkTable& table) {
  const double s = table.sign();
  out << "strategy,iter,runs,mean_best_test,std_best_test,mean_best_val,std_best_val\n";
  for (const auto& g : group(result, config)) {
    const int budget = static_cast<int>(g.traces.front()->records.size());
    bool equal_length = true;
    for (const auto* t : g.traces) equal_length &= static_cast<int>(t->records.size()) == budget;
    if (!equal_length) throw Error("summary: runs of '" + g.name + "' have different lengths");
    const Curve test = mean_curve(g.traces, budget, TraceMetric::best_test);
    const Curve val = mean_curve(g.traces, budget, TraceMetric::best_val);
    for (int i = 0; i < budget; ++i) {
      out << g.name << ',' << i + 1 << ',' << g.traces.size() << ','
          << format_double(s * test.mean[i]) << ',' << format_double(test.std[i]) << ','
          << format_double(s * val.mean[i]) << ',' << format_double(val.std[i]) << '\n';
    }
  }
}

void write_speedup_csv(std::ostream& out, const ExperimentResult& result,
                       const ExperimentConfig& config) {
  const auto groups = group(result, config);
  const std::string reference = config.resolved_reference();
  out << "strategy,reference,budget,evaluations,speedup\n";
  const bool has_reference = std::any_of(groups.begin(), groups.end(),
                                         [&](const auto& g) { return g.name == reference; });
  if (!has_reference) return;
  int budget = config.budget;
  for (const auto& g : groups) {
    for (const auto* t : g.traces) budget = std::min(budget, static_cast<int>(t->records.size()));
  }
  for (const auto& e : speedup_table(groups, reference, budget)) {
    out << e.name << ',' << reference << ',' << budget << ',';
    if (e.evaluations) {
      out << *e.evaluations << ',' << format_double(static_cast<double>(budget) / *e.evaluations);
    } else {
      out << "not_reached,";
    }
    out << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto table = load_benchmark(config.source);
  const auto selection = ProxySelection::parse(config.proxies);
  ProxyContext ctx;
  ctx.space = table->spec();
  const auto proxies = build_proxies(selection, table, ctx);

  const auto trace_dir = config.out / "traces";
  std::filesystem::create_directories(trace_dir);

  ExperimentResult result;
  for (auto s : config.strategies) {
    for (int r = 0; r < config.reps; ++r) {
      result.runs.push_back({s, config.seed_base + static_cast<std::uint64_t>(r), {}, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < result.runs.size(); i = next++) {
      auto& run = result.runs[i];
      SearchRun cfg;
      cfg.strategy = run.strategy;
      cfg.budget = config.budget;
      cfg.seed = run.seed;
      cfg.benchmark = table.get();
      if (run.strategy == Strategy::proxybo) cfg.proxies = proxies;
      cfg.sampler.q = config.q;
      cfg.sampler.tau0 = config.tau0;
      cfg.sampler.log_base = config.log_base;
      try {
        RunTrace trace = run_search(cfg);
        std::ostringstream csv;
        write_trace_csv(csv, trace, *table);
        write_file_atomic(trace_dir / trace_file_name(run.strategy, run.seed), csv.str());
        run.trace = std::move(trace);
        std::lock_guard lock(log_mutex);
        logger()->info("{} seed {} done", to_string(run.strategy), run.seed);
      } catch (const std::exception& e) {
        run.error = e.what();
        std::lock_guard lock(log_mutex);
        logger()->error("{} seed {} failed: {}", to_string(run.strategy), run.seed, e.what());
      }
    }
  };
  {
    const int n = std::min<int>(config.jobs, static_cast<int>(result.runs.size()));
    std::vector<std::jthread> pool;
    for (int j = 1; j < n; ++j) pool.emplace_back(worker);
    worker();
  }
  for (const auto& run : result.runs) result.failures += run.trace ? 0 : 1;

  std::ostringstream summary, speedup;
  write_summary_csv(summary, result, config, *table);
  write_speedup_csv(speedup, result, config);
  write_file_atomic(config.out / "summary.csv", summary.str());
  write_file_atomic(config.out / "speedup.csv", speedup.str());
  return result;
}

std::vector<ScoreRow> score_report(const ScoreConfig& config) {
  if (config.sample_n < 2) throw InvalidArgument("sample-n: must be >= 2");
  const auto table = load_benchmark(config.source);
  const auto selection = ProxySelection::parse(config.proxies);
  ProxyContext ctx;
  ctx.space = table->spec();
  const auto proxies = build_proxies(selection, table, ctx);

  std::vector<const TableRecord*> sample;
  for (const auto& r : table->records()) sample.push_back(&r);
  if (static_cast<std::size_t>(config.sample_n) < sample.size()) {
    Rng rng(derive_seed(config.seed, 0));
    std::vector<const TableRecord*> picked;
    std::sample(sample.begin(), sample.end(), std::back_inserter(picked),
                config.sample_n, rng.engine());
    sample = std::move(picked);
  }
  std::vector<double> objective;
  for (const auto* r : sample) objective.push_back(table->objective_test(*r));

  std::vector<ScoreRow> rows;
  for (const auto& p : proxies) {
    ScoreRow row{p->name(), sample.size(), {}, {}};
    std::vector<double> scores;
    for (const auto* r : sample) scores.push_back(p->score(r->x));
    try {
      row.spearman = spearman(scores, objective);
    } catch (const InvalidArgument&) {
    }
    try {
      row.spearman_top10 = spearman_top(scores, objective, 0.1);
    } catch (const InvalidArgument&) {
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_score_csv(std::ostream& out, const std::vector<ScoreRow>& rows) {
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("nan"); };
  out << "proxy,n,spearman,spearman_top10\n";
  for (const auto& r : rows) {
    out << r.proxy << ',' << r.n << ',' << cell(r.spearman) << ',' << cell(r.spearman_top10) << '\n';
  }
}

InfluenceReport influence_report(const std::vector<std::filesystem::path>& traces) {
  if (traces.empty()) throw InvalidArgument("trace-influence: no trace files given");
  InfluenceReport report;
  struct Acc {
    std::size_t runs = 0;
    std::vector<double> g, w;
  };
  std::map<int, Acc> acc;
  bool first = true;
  for (const auto& path : traces) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("trace-influence: cannot open '" + path.string() + "'");
    TraceTable t;
    try {
      t = read_trace_csv(in);
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.field(), path.string() + ": " + e.what());
    }
    if (first) {
      report.proxy_names = t.proxy_names;
      first = false;
    } else if (t.proxy_names != report.proxy_names) {
      throw InvalidArgument("trace-influence: '" + path.string() + "' has different proxy columns");
    }
    const std::size_t k = t.proxy_names.size() + 1;
    if (std::none_of(t.rows.begin(), t.rows.end(), [](const auto& r) { return r.g[0].has_value(); })) {
      throw InvalidArgument("trace-influence: '" + path.string() + "' has no guidance snapshots");
    }
    for (const auto& row : t.rows) {
      if (!row.g[0]) continue;
      auto& a = acc[row.iteration];
      if (a.g.empty()) {
        a.g.assign(k, 0.0);
        a.w.assign(k, 0.0);
      }
      ++a.runs;
      for (std::size_t c = 0; c < k; ++c) {
        a.g[c] += row.g[c].value_or(0.0);
        a.w[c] += row.weights[c].value_or(0.0);
      }
    }
  }
  for (auto& [it, a] : acc) {
    InfluenceRow row{it, a.runs, a.g, a.w};
    for (double& v : row.g) v /= static_cast<double>(a.runs);
    for (double& v : row.weights) v /= static_cast<double>(a.runs);
    if (!report.crossover && row.g.size() > 1 &&
        std::all_of(row.g.begin() + 1, row.g.end(), [&](double g) { return row.g[0] > g; })) {
      report.crossover = it;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_influence_csv(std::ostream& out, const InfluenceReport& report) {
  out << "iteration,G_M";
  for (const auto& n : report.proxy_names) out << ",G_" << n;
  out << ",I_M";
  for (const auto& n : report.proxy_names) out << ",I_" << n;
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.iteration;
    for (double g : r.g) out << ',' << format_double(g);
    for (double w : r.weights) out << ',' << format_double(w);
    out << '\n';
  }
}

}  // namespace proxybo::cli
