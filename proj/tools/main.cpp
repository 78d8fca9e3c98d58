#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/experiment.hpp"
#include "cli/synthetic_file.hpp"
#include "proxybo/error.hpp"

namespace pc = proxybo::cli;

namespace {

void add_source(CLI::App* cmd, pc::BenchmarkSource& source) {
  auto* table = cmd->add_option("--benchmark", source.table, "Benchmark table file");
  auto* synth = cmd->add_option("--synthetic", source.synthetic, "Synthetic benchmark spec (JSON)");
  table->excludes(synth);
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    pc::write_file_atomic(path, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proxy-guided Bayesian optimization over tabular search spaces"};
  app.set_config("--config", "", "TOML file with option values; [run] etc. sections per command");
  app.require_subcommand(1);

  pc::ExperimentConfig run;
  std::string strategies = "proxybo";
  std::string log_base = "e";
  auto* run_cmd = app.add_subcommand("run", "Run repeated searches and write traces and summaries");
  add_source(run_cmd, run.source);
  run_cmd->add_option("--strategy", strategies, "Comma list of proxybo, bo, rea, random")
      ->capture_default_str();
  run_cmd->add_option("--budget", run.budget, "Evaluations per run")->capture_default_str();
  run_cmd->add_option("--reps", run.reps, "Runs per strategy")->capture_default_str();
  run_cmd->add_option("--seed-base", run.seed_base, "Run r uses seed base + r")->capture_default_str();
  run_cmd->add_option("--tau0", run.tau0, "Initial softmax temperature")->capture_default_str();
  run_cmd->add_option("--q", run.q, "Candidates per iteration")->capture_default_str();
  run_cmd->add_option("--proxies", run.proxies,
                      "none, or a comma list of snip, synflow, jacob_cov, tabular:<column>")
      ->capture_default_str();
  run_cmd->add_option("--log-base", log_base, "Temperature log base: e or 10")
      ->check(CLI::IsMember({"e", "10"}))
      ->capture_default_str();
  run_cmd->add_option("--jobs", run.jobs, "Parallel runs")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--reference", run.reference,
                      "Strategy the speedup report is measured against");

  pc::ScoreConfig score;
  std::string score_out;
  auto* score_cmd = app.add_subcommand("score", "Spearman correlation of proxies with the objective");
  add_source(score_cmd, score.source);
  score_cmd->add_option("--proxies", score.proxies, "As for run")->capture_default_str();
  score_cmd->add_option("--sample-n", score.sample_n, "Records to sample")->capture_default_str();
  score_cmd->add_option("--seed", score.seed, "Sampling seed")->capture_default_str();
  score_cmd->add_option("--out", score_out, "CSV output file (default stdout)");

  std::vector<std::string> trace_files;
  std::string influence_out;
  auto* infl_cmd = app.add_subcommand("trace-influence", "Mean G and influence per iteration");
  infl_cmd->add_option("traces", trace_files, "Trace CSV files")->required();
  infl_cmd->add_option("--out", influence_out, "CSV output file (default stdout)");

  std::string gen_spec, gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic benchmark table");
  gen_cmd->add_option("--synthetic", gen_spec, "Synthetic benchmark spec (JSON)")->required();
  gen_cmd->add_option("--out", gen_out, "Table output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      run.strategies.clear();
      std::stringstream list(strategies);
      for (std::string s; std::getline(list, s, ',');) {
        run.strategies.push_back(proxybo::parse_strategy(s));
      }
      run.log_base = log_base == "10" ? proxybo::LogBase::base10 : proxybo::LogBase::natural;
      const auto result = pc::run_experiment(run);
      if (result.failures > 0) {
        std::cerr << result.failures << " of " << result.runs.size() << " runs failed\n";
        return 1;
      }
    } else if (*score_cmd) {
      std::ostringstream csv;
      pc::write_score_csv(csv, pc::score_report(score));
      emit(score_out, csv.str());
    } else if (*infl_cmd) {
      std::vector<std::filesystem::path> paths(trace_files.begin(), trace_files.end());
      const auto report = pc::influence_report(paths);
      std::ostringstream csv;
      pc::write_influence_csv(csv, report);
      emit(influence_out, csv.str());
      if (report.crossover) {
        std::cerr << "surrogate crossover at iteration " << *report.crossover << '\n';
      } else {
        std::cerr << "surrogate never leads every proxy\n";
      }
    } else if (*gen_cmd) {
      const auto f = pc::load_synthetic_file(gen_spec);
      std::ostringstream text;
      proxybo::generate_synthetic(f.spec, f.seed).save(text);
      pc::write_file_atomic(gen_out, text.str());
    }
  } catch (const proxybo::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
