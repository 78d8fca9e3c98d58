#include "proxybo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "proxybo/error.hpp"

namespace proxybo {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double expected_improvement(double mean, double variance, double y_best) {
  if (std::isnan(mean) || std::isnan(variance) || std::isnan(y_best)) {
    throw InvalidArgument("expected_improvement: NaN input");
  }
  if (variance < 0.0) throw InvalidArgument("expected_improvement: negative variance");
  if (variance == 0.0) return std::max(y_best - mean, 0.0);
  const double sigma = std::sqrt(variance);
  const double z = (y_best - mean) / sigma;
  const double ei = sigma * (z * normal_cdf(z) + normal_pdf(z));
  return std::max(ei, 0.0);
}

}  // namespace proxybo
