#pragma once

#include <optional>
#include <span>
#include <vector>

namespace proxybo {

enum class RankOrder {
  ascending,   // rank 1 = smallest value
  descending,  // rank 1 = largest value
};

// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values,
                                  RankOrder order = RankOrder::ascending);

// Pearson correlation; nullopt when either input is constant.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

// Spearman rank correlation with average-rank ties. Throws InvalidArgument on
// length mismatch, fewer than 2 values, or constant input.
double spearman(std::span<const double> a, std::span<const double> b);

// Spearman over the subset whose b-values are within the best (smallest)
// `fraction` of b, as in "top-10%" diagnostics.
double spearman_top(std::span<const double> a, std::span<const double> b,
                    double fraction);

double mean(std::span<const double> v);
// Sample standard deviation (n - 1 denominator); 0 for a single value.
double stddev(std::span<const double> v);
double median(std::vector<double> v);

struct WilcoxonResult {
  int n = 0;               // pairs with a nonzero difference
  double w_plus = 0.0;     // rank sum of positive differences (x - y > 0)
  double z = 0.0;          // normal approximation with tie correction
  double p_greater = 1.0;  // one-sided p-value for "x tends to exceed y"
  double p_two_sided = 1.0;
};

// Paired Wilcoxon signed-rank test, zero differences dropped, normal
// approximation with continuity and tie corrections.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x,
                                    std::span<const double> y);

}  // namespace proxybo
