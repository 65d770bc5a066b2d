#pragma once

#include <cstddef>
#include <vector>

namespace cayley::stats {

// upper quantile of the chi-square distribution (Wilson-Hilferty), good to a
// fraction of a percent for the dof counts used here
double chi2_quantile(double p, double dof);

// Pearson statistic over cells with expected >= min_expected; returns the
// statistic and the number of cells kept
struct Chi2Result {
  double statistic = 0;
  long cells = 0;
  double dof() const { return cells > 1 ? static_cast<double>(cells - 1) : 1.0; }
};
Chi2Result chi2_statistic(const std::vector<double>& observed,
                          const std::vector<double>& expected, double min_expected);

// two-sample chi-square over paired histograms, dropping cells with fewer
// than min_total combined counts
Chi2Result chi2_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                           double min_total);

// Kolmogorov-Smirnov D against the uniform[0,1] cdf; samples need not be
// sorted on entry
double ks_statistic_uniform01(std::vector<double> samples);

// asymptotic critical value c(alpha)/sqrt(n) at the 1% level
double ks_threshold_1pct(long n);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cayley::stats
