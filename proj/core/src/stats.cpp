#include "proxybo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "proxybo/acquisition.hpp"
#include "proxybo/error.hpp"

namespace proxybo {

std::vector<double> average_ranks(std::span<const double> values, RankOrder order) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return order == RankOrder::ascending ? values[a] < values[b] : values[a] > values[b];
  };
  std::stable_sort(idx.begin(), idx.end(), less);
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    // positions i..j-1 share ranks i+1..j
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[idx[t]] = avg;
    i = j;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("spearman: length mismatch");
  if (a.size() < 2) throw InvalidArgument("spearman: need at least 2 values");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  auto r = pearson(ra, rb);
  if (!r) throw InvalidArgument("spearman: constant input");
  return *r;
}

double spearman_top(std::span<const double> a, std::span<const double> b,
                    double fraction) {
  if (a.size() != b.size()) throw InvalidArgument("spearman: length mismatch");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("spearman_top: fraction must be in (0, 1]");
  }
  std::vector<std::size_t> idx(b.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return b[i] < b[j]; });
  const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(b.size())));
  std::vector<double> sa, sb;
  for (std::size_t t = 0; t < keep; ++t) {
    sa.push_back(a[idx[t]]);
    sb.push_back(b[idx[t]]);
  }
  return spearman(sa, sb);
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
  if (v.empty()) throw InvalidArgument("median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("wilcoxon: length mismatch");
  std::vector<double> diff, absdiff;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) {
      diff.push_back(d);
      absdiff.push_back(std::abs(d));
    }
  }
  WilcoxonResult res;
  res.n = static_cast<int>(diff.size());
  if (res.n == 0) return res;
  const auto ranks = average_ranks(absdiff);
  for (std::size_t i = 0; i < diff.size(); ++i) {
    if (diff[i] > 0) res.w_plus += ranks[i];
  }
  const double n = res.n;
  const double mu = n * (n + 1) / 4.0;
  // Tie correction: subtract sum(t^3 - t)/48 over tie groups.
  std::vector<double> sorted = absdiff;
  std::sort(sorted.begin(), sorted.end());
  double tie = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie += t * t * t - t;
    i = j;
  }
  const double var = n * (n + 1) * (2 * n + 1) / 24.0 - tie / 48.0;
  if (var <= 0.0) return res;
  const double sd = std::sqrt(var);
  const double dev = res.w_plus - mu;
  const double cc = dev > 0 ? 0.5 : (dev < 0 ? -0.5 : 0.0);
  res.z = (dev - cc) / sd;
  res.p_greater = 1.0 - normal_cdf((res.w_plus - mu - 0.5) / sd);
  res.p_two_sided = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(res.z))));
  return res;
}

}  // namespace proxybo
