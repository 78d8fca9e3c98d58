#pragma once

namespace proxybo {

// Expected improvement below y_best under a Gaussian predictive distribution.
// Closed form sigma * (z * Phi(z) + phi(z)) with z = (y_best - mean) / sigma,
// and max(y_best - mean, 0) when variance is 0. Throws InvalidArgument on NaN
// inputs or negative variance.
double expected_improvement(double mean, double variance, double y_best);

double normal_pdf(double z);
double normal_cdf(double z);

}  // namespace proxybo
