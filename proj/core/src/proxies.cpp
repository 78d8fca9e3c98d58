#include "proxybo/proxies.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "proxybo/error.hpp"
#include "proxybo/log.hpp"

namespace proxybo {

const char* to_string(ProxyKind kind) {
  switch (kind) {
    case ProxyKind::snip: return "snip";
    case ProxyKind::synflow: return "synflow";
    case ProxyKind::jacob_cov: return "jacob_cov";
    case ProxyKind::tabular: return "tabular";
  }
  return "unknown";
}

namespace {

// Element-wise a * b over matching parameter sets.
ParamSet hadamard(const ParamSet& a, const ParamSet& b) {
  ParamSet out = a;
  for (std::size_t l = 0; l < out.layers.size(); ++l) {
    out.layers[l].weight = a.layers[l].weight.cwiseProduct(b.layers[l].weight);
    out.layers[l].bias = a.layers[l].bias.cwiseProduct(b.layers[l].bias);
  }
  return out;
}

double finite_or_worst(double score, const ArchEncoding& x, const char* proxy) {
  if (std::isfinite(score)) return score;
  logger()->warn("{} score for {} is not finite; using the worst-case sentinel", proxy,
                 x.to_string());
  return kWorstScore;
}

}  // namespace

ParamSet snip_saliency(const NetSpec& net, const ParamSet& params, const Batch& batch) {
  const Gradient g = grad_params(net, params, batch, Loss::squared_error);
  return hadamard(g.params, params).abs();
}

ParamSet synflow_saliency(const NetSpec& net, const ParamSet& params, bool use_abs) {
  const ParamSet theta = use_abs ? params.abs() : params;
  Batch ones{Matrix::Ones(1, net.input_dim), std::nullopt};
  const Gradient g = grad_params(net, theta, ones, Loss::sum_of_outputs);
  return hadamard(g.params, theta);
}

double sum_of(const ParamSet& p) {
  double s = 0.0;
  for (const auto& l : p.layers) s += l.weight.sum() + l.bias.sum();
  return s;
}

Matrix row_correlation(const Matrix& rows) {
  const Eigen::Index n = rows.rows();
  Matrix centered = rows.colwise() - rows.rowwise().mean();
  Vector norms = centered.rowwise().norm();
  std::vector<bool> degenerate(n);
  std::size_t bad = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = rows.row(i).cwiseAbs().maxCoeff();
    degenerate[i] = !(norms(i) > 1e-12 * scale) || norms(i) == 0.0;
    if (degenerate[i]) {
      ++bad;
    } else {
      centered.row(i) /= norms(i);
    }
  }
  if (bad) logger()->debug("row_correlation: {} zero-variance rows", bad);
  Matrix k = centered * centered.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (degenerate[i] || degenerate[j]) k(i, j) = 0.0;
    }
    k(i, i) = 1.0;
  }
  return k;
}

double neg_log_det(const Matrix& k, double epsilon) {
  const Matrix reg = k + epsilon * Matrix::Identity(k.rows(), k.cols());
  Eigen::PartialPivLU<Matrix> lu(reg);
  const Matrix& u = lu.matrixLU();
  double log_abs_det = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) log_abs_det += std::log(std::abs(u(i, i)));
  return -log_abs_det;
}

double jacob_cov_from_jacobian(const Matrix& jacobian_rows, double epsilon) {
  return neg_log_det(row_correlation(jacobian_rows), epsilon);
}

double score_snip(const ArchEncoding& x, const ProxyContext& ctx) {
  try {
    const Network net = instantiate(x, ctx.space, ctx.init_seed);
    const Batch batch = gaussian_batch(ctx.batch_size, net.spec.input_dim,
                                       net.spec.output_dim(), ctx.batch_seed);
    return finite_or_worst(-sum_of(snip_saliency(net.spec, net.params, batch)), x, "snip");
  } catch (const NumericOverflow& e) {
    logger()->warn("snip overflow for {}: {}", x.to_string(), e.what());
    return kWorstScore;
  }
}

double score_synflow(const ArchEncoding& x, const ProxyContext& ctx) {
  try {
    const Network net = instantiate(x, ctx.space, ctx.init_seed);
    return finite_or_worst(-sum_of(synflow_saliency(net.spec, net.params, ctx.synflow_abs)),
                           x, "synflow");
  } catch (const NumericOverflow& e) {
    logger()->warn("synflow overflow for {}: {}", x.to_string(), e.what());
    return kWorstScore;
  }
}

double score_jacob_cov(const ArchEncoding& x, const ProxyContext& ctx) {
  if (ctx.batch_size < 2) throw InvalidArgument("jacob_cov needs batch_size >= 2");
  try {
    const Network net = instantiate(x, ctx.space, ctx.init_seed);
    const Batch batch = gaussian_batch(ctx.batch_size, net.spec.input_dim, 0, ctx.batch_seed);
    const Matrix jac = grad_inputs_per_example(net.spec, net.params, batch.inputs);
    return finite_or_worst(jacob_cov_from_jacobian(jac, ctx.jacob_cov_epsilon), x, "jacob_cov");
  } catch (const NumericOverflow& e) {
    logger()->warn("jacob_cov overflow for {}: {}", x.to_string(), e.what());
    return kWorstScore;
  }
}

double score_tabular(const ArchEncoding& x, const BenchmarkTable& table,
                     const std::string& column) {
  const auto col = table.proxy_column(column);
  if (!col) throw LookupError("table '" + table.meta().name + "' has no proxy column '" + column + "'");
  const auto& rec = table.at(x);
  const auto& v = rec.proxies[*col];
  if (!v) throw LookupError("no '" + column + "' score for " + x.to_string());
  return *v;
}

namespace {

class FormulaProxy final : public ProxyScorer {
 public:
  FormulaProxy(ProxyKind kind, ProxyContext ctx)
      : kind_(kind), ctx_(std::move(ctx)), name_(to_string(kind)) {}
  const std::string& name() const override { return name_; }
  ProxyKind kind() const override { return kind_; }
  double score(const ArchEncoding& x) const override {
    switch (kind_) {
      case ProxyKind::snip: return score_snip(x, ctx_);
      case ProxyKind::synflow: return score_synflow(x, ctx_);
      case ProxyKind::jacob_cov: return score_jacob_cov(x, ctx_);
      case ProxyKind::tabular: break;
    }
    throw InvalidArgument("formula proxy cannot be tabular");
  }

 private:
  ProxyKind kind_;
  ProxyContext ctx_;
  std::string name_;
};

class TabularProxy final : public ProxyScorer {
 public:
  TabularProxy(std::shared_ptr<const BenchmarkTable> table, std::string column)
      : table_(std::move(table)), column_(std::move(column)) {
    if (!table_->proxy_column(column_)) {
      throw LookupError("table '" + table_->meta().name + "' has no proxy column '" + column_ + "'");
    }
  }
  const std::string& name() const override { return column_; }
  ProxyKind kind() const override { return ProxyKind::tabular; }
  double score(const ArchEncoding& x) const override { return score_tabular(x, *table_, column_); }

 private:
  std::shared_ptr<const BenchmarkTable> table_;
  std::string column_;
};

}  // namespace

ProxyPtr make_formula_proxy(ProxyKind kind, const ProxyContext& ctx) {
  if (kind == ProxyKind::tabular) throw InvalidArgument("use make_tabular_proxy for tabular scores");
  ctx.space.validate();
  return std::make_shared<FormulaProxy>(kind, ctx);
}

ProxyPtr make_tabular_proxy(std::shared_ptr<const BenchmarkTable> table,
                            const std::string& column) {
  return std::make_shared<TabularProxy>(std::move(table), column);
}

double CachingScorer::score(const ArchEncoding& x) const {
  auto it = cache_.find(x);
  if (it != cache_.end()) return it->second;
  const double s = inner_->score(x);
  cache_.emplace(x, s);
  return s;
}

}  // namespace proxybo
