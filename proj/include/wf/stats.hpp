// Test statistics used by the validation suites: regularized incomplete
// gamma/beta, chi-square p-values, Kolmogorov-Smirnov thresholds.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wf {

namespace detail {

inline double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::fabs(term) < 1e-16 * std::fabs(sum)) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  // Lentz continued fraction for Q(a,x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Regularized lower incomplete gamma P(a,x).
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_contfrac(a, x);
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// Regularized incomplete beta I_x(a,b), Lentz continued fraction.
inline double inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
  bool swap = x > (a + 1.0) / (a + b + 2.0);
  if (swap) return 1.0 - inc_beta(b, a, 1.0 - x);
  const double tiny = 1e-300;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < 5000; ++m) {
    double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return front * h / a;
}

// Beta(a,b) CDF.
inline double beta_cdf(double a, double b, double x) { return inc_beta(a, b, x); }

// p-value of a chi-square statistic with dof degrees of freedom.
inline double chi2_pvalue(double stat, int dof) {
  if (dof <= 0) throw std::domain_error("chi2_pvalue: dof must be > 0");
  return gamma_q(0.5 * dof, 0.5 * stat);
}

// One-sample KS critical distance at significance alpha (asymptotic).
inline double ks_critical(double alpha, std::size_t n) {
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c / std::sqrt(static_cast<double>(n));
}

// Two-sample KS critical distance.
inline double ks_critical2(double alpha, std::size_t n, std::size_t m) {
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt((n + m) / (static_cast<double>(n) * m));
}

// Sup distance between the empirical CDF of samples and a model CDF.
template <typename Cdf>
inline double ks_distance(std::vector<double> samples, const Cdf& cdf) {
  std::sort(samples.begin(), samples.end());
  double d = 0.0;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::fabs(f - i / n));
    d = std::max(d, std::fabs((i + 1) / n - f));
  }
  return d;
}

inline double ks_distance2(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                              static_cast<double>(j) / b.size()));
  }
  return d;
}

// Pearson chi-square against expected counts; bins with tiny expectation are
// pooled into their neighbor. Returns (statistic, dof).
struct Chi2Result {
  double stat = 0.0;
  int dof = 0;
  double pvalue = 1.0;
};

inline Chi2Result chi2_gof(const std::vector<double>& observed,
                           const std::vector<double>& expected,
                           double min_expected = 5.0) {
  double o_acc = 0.0, e_acc = 0.0, stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= min_expected) {
      stat += (o_acc - e_acc) * (o_acc - e_acc) / e_acc;
      ++cells;
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 && cells > 0) {  // fold remainder into the last cell
    stat += (o_acc - e_acc) * (o_acc - e_acc) / e_acc;
  }
  Chi2Result r;
  r.stat = stat;
  r.dof = std::max(1, cells - 1);
  r.pvalue = chi2_pvalue(stat, r.dof);
  return r;
}

}  // namespace wf
