#include "cayley/stats_util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cayley::stats {

namespace {
// inverse standard normal cdf (Acklam's rational approximation)
double normal_quantile(double p) {
  if (p <= 0 || p >= 1) throw std::invalid_argument("normal_quantile: p in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > 1 - plow) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}
}  // namespace

double chi2_quantile(double p, double dof) {
  if (dof < 1) throw std::invalid_argument("chi2_quantile: dof >= 1");
  double z = normal_quantile(p);
  double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  return dof * t * t * t;
}

Chi2Result chi2_statistic(const std::vector<double>& observed,
                          const std::vector<double>& expected, double min_expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi2_statistic: size mismatch");
  Chi2Result r;
  for (size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < min_expected) continue;
    double d = observed[i] - expected[i];
    r.statistic += d * d / expected[i];
    ++r.cells;
  }
  return r;
}

Chi2Result chi2_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                           double min_total) {
  if (a.size() != b.size()) throw std::invalid_argument("chi2_two_sample: size mismatch");
  double ta = 0, tb = 0;
  for (double v : a) ta += v;
  for (double v : b) tb += v;
  if (ta <= 0 || tb <= 0) throw std::invalid_argument("chi2_two_sample: empty histogram");
  double ka = std::sqrt(tb / ta), kb = std::sqrt(ta / tb);
  Chi2Result r;
  for (size_t i = 0; i < a.size(); ++i) {
    double tot = a[i] + b[i];
    if (tot < min_total) continue;
    double d = ka * a[i] - kb * b[i];
    r.statistic += d * d / tot;
    ++r.cells;
  }
  return r;
}

double ks_statistic_uniform01(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  size_t n = samples.size();
  double d = 0;
  for (size_t i = 0; i < n; ++i) {
    double f = std::min(std::max(samples[i], 0.0), 1.0);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return d;
}

double ks_threshold_1pct(long n) { return 1.62762 / std::sqrt(static_cast<double>(n)); }

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need matching vectors, length >= 2");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    double pred = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace cayley::stats
