#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "proxybo/space.hpp"
#include "proxybo/table.hpp"
#include "proxybo/tinynet.hpp"

namespace proxybo {

enum class ProxyKind { snip, synflow, jacob_cov, tabular };

const char* to_string(ProxyKind kind);

// Score returned when a proxy cannot be computed; ranks worst.
inline constexpr double kWorstScore = std::numeric_limits<double>::infinity();

// Settings for the formula proxies. The data batch is seeded standard-normal
// data; synflow ignores it.
struct ProxyContext {
  SearchSpaceSpec space;
  std::uint64_t init_seed = 0;
  std::uint64_t batch_seed = 1;
  int batch_size = 16;
  // synflow on |theta| with an all-ones input; false gives the plain form.
  bool synflow_abs = true;
  double jacob_cov_epsilon = 1e-5;
};

// Maps an encoding to a score where lower predicts a better objective.
// Implementations are immutable and their score() is safe to call
// concurrently.
class ProxyScorer {
 public:
  virtual ~ProxyScorer() = default;
  virtual const std::string& name() const = 0;
  virtual ProxyKind kind() const = 0;
  virtual double score(const ArchEncoding& x) const = 0;
};

using ProxyPtr = std::shared_ptr<const ProxyScorer>;

// --- per-parameter saliencies on an explicit network ---

// |dL/dtheta * theta| for the squared-error loss on `batch`.
ParamSet snip_saliency(const NetSpec& net, const ParamSet& params,
                       const Batch& batch);
// dL/dtheta * theta with L = sum of outputs on an all-ones input. When
// use_abs, parameters are replaced by their absolute values first.
ParamSet synflow_saliency(const NetSpec& net, const ParamSet& params,
                          bool use_abs = true);

double sum_of(const ParamSet& p);

// Pearson correlation of the rows of `rows`. Rows with zero variance get
// correlation 0 with every other row and 1 with themselves.
Matrix row_correlation(const Matrix& rows);

// -log|det(K + eps I)| with K the row correlation of the Jacobian rows.
double jacob_cov_from_jacobian(const Matrix& jacobian_rows, double epsilon);
double neg_log_det(const Matrix& k, double epsilon);

// --- architecture scores (lower is better) ---

double score_snip(const ArchEncoding& x, const ProxyContext& ctx);
double score_synflow(const ArchEncoding& x, const ProxyContext& ctx);
double score_jacob_cov(const ArchEncoding& x, const ProxyContext& ctx);
// Throws LookupError when x or the column is missing.
double score_tabular(const ArchEncoding& x, const BenchmarkTable& table,
                     const std::string& column);

ProxyPtr make_formula_proxy(ProxyKind kind, const ProxyContext& ctx);
ProxyPtr make_tabular_proxy(std::shared_ptr<const BenchmarkTable> table,
                            const std::string& column);

// Memoizes another scorer. Not thread-safe; meant to be owned by one run.
class CachingScorer final : public ProxyScorer {
 public:
  explicit CachingScorer(ProxyPtr inner) : inner_(std::move(inner)) {}
  const std::string& name() const override { return inner_->name(); }
  ProxyKind kind() const override { return inner_->kind(); }
  double score(const ArchEncoding& x) const override;

 private:
  ProxyPtr inner_;
  mutable std::unordered_map<ArchEncoding, double, ArchEncodingHash> cache_;
};

}  // namespace proxybo
