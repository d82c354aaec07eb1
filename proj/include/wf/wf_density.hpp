// Neutral Wright-Fisher transition densities in both expansions (spectral
// Jacobi series and the coalescent Beta mixture), the g-series entering the
// bridge formulas, Yaglom densities, and the h-transform identity probes.
#pragma once

#include "wf/coalescent.hpp"
#include "wf/orthopoly.hpp"
#include "wf/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wf {

struct DensityQuery {
  double x;
  double y;
  double t;
  MutationPair theta;

  DensityQuery(double x_, double y_, double t_, MutationPair th)
      : x(x_), y(y_), t(t_), theta(th) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("DensityQuery: x in [0,1]");
    if (y <= 0.0 || y >= 1.0) throw std::domain_error("DensityQuery: y in (0,1)");
    if (t <= 0.0) throw std::domain_error("DensityQuery: t > 0");
  }
};

struct DensityValue {
  double value = 0.0;
  double truncation_bound = 0.0;
  bool bound_ok = true;  // false when the requested truncation leaves > 1e-6
};

// Starting summation index of the spectral expansion.
inline int spectral_start_index(const MutationPair& th) {
  if (th.theta1 > 0.0 && th.theta2 > 0.0) return 0;
  if (th.theta() > 0.0) return 1;
  return 2;
}

// Spectral expansion. truncation < 0 selects N automatically from the
// exponential factor; the reported bound is an estimate, not an envelope.
inline DensityValue density_spectral(const DensityQuery& q, int truncation = -1) {
  const double t1 = q.theta.theta1, t2 = q.theta.theta2, th = q.theta.theta();
  const int n0 = spectral_start_index(q.theta);
  const double r = 2.0 * q.x - 1.0, s = 2.0 * q.y - 1.0;
  int N = truncation;
  if (N < 0) {
    N = n0;
    while (0.5 * N * (N + th - 1.0) * q.t < 46.0 && N < 400) ++N;
  }
  if (N < n0) throw std::domain_error("density_spectral: truncation below start index");
  double sum = 0.0;
  for (int n = n0; n <= N; ++n) {
    double lc = log_spectral_coeff(n, t1, t2) - 0.5 * n * (n + th - 1.0) * q.t;
    sum += std::exp(lc) * jacobi_eval(t2 - 1.0, t1 - 1.0, n, r) *
           jacobi_eval(t2 - 1.0, t1 - 1.0, n, s);
  }
  DensityValue out;
  out.value = sum * std::exp((t1 - 1.0) * std::log(q.y) +
                             (t2 - 1.0) * std::log1p(-q.y));
  // estimate: first omitted term with a polynomial-growth cushion
  int n = N + 1;
  double lc = log_spectral_coeff(n, t1, t2) - 0.5 * n * (n + th - 1.0) * q.t;
  double pmax = std::exp(std::lgamma(n + std::max(t1, t2)) - std::lgamma(n + 1.0) -
                         std::lgamma(std::max(t1, t2)));
  out.truncation_bound = 6.0 * std::exp(lc) * (pmax + 1.0) * (pmax + 1.0);
  out.bound_ok = out.truncation_bound <= 1e-6;
  return out;
}

// The classical theta=0 form x(1-x) sum (2i+1)i(i+1) R_{i-1}(r) R_{i-1}(s)
// with R_i the Jacobi(1,1) polynomials scaled to R_i(1)=1. Kept as an
// independent code path against density_spectral's (-1,-1) route.
inline double density_spectral_00(double x, double y, double t, int truncation = -1) {
  int N = truncation;
  if (N < 0) {
    N = 1;
    while (0.5 * N * (N + 1.0) * t < 46.0 && N < 400) ++N;
  }
  double r = 2.0 * x - 1.0, s = 2.0 * y - 1.0;
  double sum = 0.0;
  for (int i = 1; i <= N; ++i) {
    double Ri_r = jacobi_eval(1.0, 1.0, i - 1, r) / i;
    double Ri_s = jacobi_eval(1.0, 1.0, i - 1, s) / i;
    sum += std::exp(-0.5 * i * (i + 1.0) * t) * (2.0 * i + 1.0) * i * (i + 1.0) *
           Ri_r * Ri_s;
  }
  return x * (1.0 - x) * sum;
}

// Coalescent mixture representation of the transition density from a fixed
// start x: components (weight, a, b) with weight q_l(t) Binom(l,x)(k) and
// (a,b) = (k+theta1, l-k+theta2). tail_l2_mass bounds sum_{l>L} l(l-1) q_l.
struct BetaMixture {
  struct Component {
    double weight;
    double a;
    double b;
  };
  std::vector<Component> components;
  double tail_l2_mass = 0.0;
  MutationPair theta;

  double eval(double y) const {
    double f = 0.0;
    for (const auto& c : components) {
      if (c.weight == 0.0) continue;
      f += c.weight * std::exp((c.a - 1.0) * std::log(y) +
                               (c.b - 1.0) * std::log1p(-y) -
                               log_beta_fn(c.a, c.b));
    }
    return f;
  }

  // Pointwise bound on the truncation error of eval at interior y.
  double tail_bound_at(double y) const {
    double boundary = 1.0;
    if (theta.theta1 < 1.0 && theta.theta1 > 0.0)
      boundary = std::max(boundary, std::pow(y, theta.theta1 - 1.0));
    if (theta.theta2 < 1.0 && theta.theta2 > 0.0)
      boundary = std::max(boundary, std::pow(1.0 - y, theta.theta2 - 1.0));
    return 1.3 * boundary / std::sqrt(y * (1.0 - y)) * tail_l2_mass;
  }

  double total_weight() const {
    double w = 0.0;
    for (const auto& c : components) w += c.weight;
    return w;
  }

  // Unnormalized CDF: sum of weights times regularized incomplete betas.
  double cdf_unnormalized(double y) const {
    double f = 0.0;
    for (const auto& c : components)
      if (c.weight > 0.0) f += c.weight * inc_beta(c.a, c.b, y);
    return f;
  }
};

// Builds the mixture for start point x at time t, growing L until the
// remaining l(l-1)-mass is below tail_l2. Weights use certified q midpoints.
inline BetaMixture transition_mixture(double x, double t, const MutationPair& th,
                                      double tail_l2 = 1e-9) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("transition_mixture: x in [0,1]");
  if (t <= 0.0) throw std::domain_error("transition_mixture: t > 0");
  BetaMixture mix;
  mix.theta = th;
  const double t1 = th.theta1, t2 = th.theta2, theta = th.theta();
  const double total_l2 = factorial_moment(2, theta, t);
  double partial_l2 = 0.0, q_err = 0.0;
  const double logx = x > 0.0 ? std::log(x) : 0.0;
  const double log1mx = x < 1.0 ? std::log1p(-x) : 0.0;
  for (int l = 0; l < 4000; ++l) {
    CertifiedValue ql = q(l, theta, t, 1e-15);
    int kmin = (t1 == 0.0) ? 1 : 0;
    int kmax = (t2 == 0.0) ? l - 1 : l;
    for (int k = kmin; k <= kmax; ++k) {
      if (x == 0.0 && k > 0) continue;
      if (x == 1.0 && k < l) continue;
      double logbin = std::lgamma(l + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(l - k + 1.0) + k * logx + (l - k) * log1mx;
      double w = ql.value * std::exp(logbin);
      if (w > 0.0)
        mix.components.push_back({w, k + t1, l - k + t2});
    }
    if (l >= 2) {
      partial_l2 += l * (l - 1.0) * ql.value;
      q_err += l * (l - 1.0) * ql.error_bound;
    }
    double excess = std::max(0.0, total_l2 - partial_l2 + q_err) + 1e-14 * total_l2;
    if (l >= 2 && excess < tail_l2) {
      mix.tail_l2_mass = excess;
      return mix;
    }
  }
  throw std::runtime_error("transition_mixture: tail did not close");
}

inline DensityValue density_mixture(const DensityQuery& q, double tol = 1e-9) {
  // translate the pointwise tolerance into an l(l-1)-mass budget at this y
  double boundary = 1.0;
  if (q.theta.theta1 < 1.0 && q.theta.theta1 > 0.0)
    boundary = std::max(boundary, std::pow(q.y, q.theta.theta1 - 1.0));
  if (q.theta.theta2 < 1.0 && q.theta.theta2 > 0.0)
    boundary = std::max(boundary, std::pow(1.0 - q.y, q.theta.theta2 - 1.0));
  double factor = 1.3 * boundary / std::sqrt(q.y * (1.0 - q.y));
  BetaMixture mix = transition_mixture(q.x, q.t, q.theta, tol / factor);
  DensityValue out;
  out.value = mix.eval(q.y);
  out.truncation_bound = mix.tail_bound_at(q.y);
  out.bound_ok = out.truncation_bound <= 1e-6;
  return out;
}

// Auto path: mixture below the empirical crossover, spectral above it.
inline constexpr double kDensityPathCrossover = 0.5;

inline double transition_density(double x, double y, double t,
                                 const MutationPair& th, double tol = 1e-9) {
  DensityQuery q(x, y, t, th);
  if (t < kDensityPathCrossover) return density_mixture(q, tol).value;
  return density_spectral(q).value;
}

// g(y;t) = sum_{l>=2} l(l-1) q_l^0(t) (1-y)^{l-2}, certified truncation.
inline double g_series(double y, double t, double tol = 1e-11) {
  if (y < 0.0 || y >= 1.0) throw std::domain_error("g_series: y in [0,1)");
  if (t <= 0.0) throw std::domain_error("g_series: t > 0");
  const double total = factorial_moment(2, 0.0, t);
  double sum = 0.0, partial = 0.0, err = 0.0;
  for (int l = 2; l < 4000; ++l) {
    CertifiedValue ql = q(l, 0.0, t, 1e-15);
    double ll = l * (l - 1.0);
    sum += ll * ql.value * std::pow(1.0 - y, l - 2.0);
    partial += ll * ql.value;
    err += ll * ql.error_bound;
    double tail = std::max(0.0, total - partial + err) * std::pow(1.0 - y, l - 1.0);
    if (tail < tol) return sum;
  }
  throw std::runtime_error("g_series: tail did not close");
}

// g_theta(y;t) = sum_{l>=1} l(l+theta-1) q_l^theta(t) (1-y)^{l+theta-2}.
inline double g_theta_series(double y, double t, double theta, double tol = 1e-11) {
  if (theta <= 0.0) throw std::domain_error("g_theta_series: theta > 0");
  if (y < 0.0 || y >= 1.0) throw std::domain_error("g_theta_series: y in [0,1)");
  const double total = factorial_moment(2, theta, t) + theta * factorial_moment(1, theta, t);
  double sum = 0.0, partial = 0.0, err = 0.0;
  for (int l = 1; l < 4000; ++l) {
    CertifiedValue ql = q(l, theta, t, 1e-15);
    double ll = l * (l + theta - 1.0);
    sum += ll * ql.value * std::pow(1.0 - y, l + theta - 2.0);
    partial += ll * ql.value;
    err += ll * ql.error_bound;
    double tail = std::max(0.0, total - partial + err) *
                  std::pow(1.0 - y, l + theta - 1.0);
    if (l >= 2 && tail < tol) return sum;
  }
  throw std::runtime_error("g_theta_series: tail did not close");
}

// Yaglom (conditioned-on-segregation limit) density; requires an absorbing
// case, i.e. at least one mutation rate zero.
inline double yaglom_density(const MutationPair& th, double y) {
  if (th.both_positive())
    throw std::domain_error("yaglom_density: undefined without absorption");
  if (y <= 0.0 || y >= 1.0) throw std::domain_error("yaglom_density: y in (0,1)");
  if (th.theta1 == 0.0 && th.theta2 > 0.0)
    return th.theta2 * std::pow(1.0 - y, th.theta2 - 1.0);
  if (th.theta2 == 0.0 && th.theta1 > 0.0)
    return th.theta1 * std::pow(y, th.theta1 - 1.0);  // mirror case
  return 1.0;  // theta1 = theta2 = 0
}

// Unnormalized reversing (speed/stationary) density of each mutation case.
inline double speed_density(const MutationPair& th, double y) {
  return std::pow(y, th.theta1 - 1.0) * std::pow(1.0 - y, th.theta2 - 1.0);
}

enum class HTransformCase { zero_zero_to_2_2, zero_theta_to_2_theta };

struct HTransformCheck {
  double lhs;
  double rhs;
};

// Both sides of f_{2,2} = e^t f_{0,0} y(1-y)/(x(1-x)) (resp. the (0,theta)
// case), evaluated through the mixture path for test assertions.
inline HTransformCheck htransform_density_check(HTransformCase c, double x,
                                                double y, double t,
                                                double theta = 0.0) {
  if (x <= 0.0 || x >= 1.0 || y <= 0.0 || y >= 1.0)
    throw std::domain_error("htransform_density_check: interior x,y only");
  HTransformCheck out{};
  if (c == HTransformCase::zero_zero_to_2_2) {
    out.lhs = density_mixture(DensityQuery(x, y, t, MutationPair(2.0, 2.0))).value;
    out.rhs = std::exp(t) *
              density_mixture(DensityQuery(x, y, t, MutationPair(0.0, 0.0))).value *
              y * (1.0 - y) / (x * (1.0 - x));
  } else {
    if (theta <= 0.0) throw std::domain_error("htransform_density_check: theta > 0");
    out.lhs = density_mixture(DensityQuery(x, y, t, MutationPair(2.0, theta))).value;
    out.rhs = std::exp(theta * t / 2.0) *
              density_mixture(DensityQuery(x, y, t, MutationPair(0.0, theta))).value *
              y / x;
  }
  return out;
}

}  // namespace wf
