// Jacobi polynomials (admissible down to parameter -1), Beta densities,
// factorial symbols and the exponential Beta moment used as the selection
// normalizer. Everything here is a pure function.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace wf {

struct MutationPair {
  double theta1 = 0.0;
  double theta2 = 0.0;

  MutationPair() = default;
  MutationPair(double t1, double t2) : theta1(t1), theta2(t2) {
    if (t1 < 0.0 || t2 < 0.0)
      throw std::invalid_argument("MutationPair: rates must be >= 0");
  }
  double theta() const { return theta1 + theta2; }
  bool both_positive() const { return theta1 > 0.0 && theta2 > 0.0; }
};

struct JacobiParams {
  double a;
  double b;
  int n;
  JacobiParams(double a_, double b_, int n_) : a(a_), b(b_), n(n_) {
    if (a < -1.0 || b < -1.0)
      throw std::domain_error("JacobiParams: parameters must be >= -1");
    if (n < 0) throw std::domain_error("JacobiParams: degree must be >= 0");
  }
};

enum class FactorialDirection { rising, falling };

struct FactorialSymbol {
  double base;
  int order;
  FactorialDirection direction;
};

// a_(k) rising or a_[k] falling; order 0 is 1 for any base.
inline double factorial_symbol(const FactorialSymbol& s) {
  if (s.order < 0) throw std::domain_error("factorial_symbol: order must be >= 0");
  double p = 1.0;
  for (int i = 0; i < s.order; ++i)
    p *= (s.direction == FactorialDirection::rising) ? s.base + i : s.base - i;
  return p;
}

inline double rising(double a, int k) {
  return factorial_symbol({a, k, FactorialDirection::rising});
}
inline double falling(double a, int k) {
  return factorial_symbol({a, k, FactorialDirection::falling});
}

namespace detail {

// Three-term recurrence from given (y_{m-1}, y_m) up to degree n.
inline double jacobi_recur_from(int m, int n, double a, double b, double r,
                                double ym1, double ym) {
  double y0 = ym1, y1 = ym;
  for (int k = m + 1; k <= n; ++k) {
    double denom = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
    double g1 = (2.0 * k + a + b - 1.0) *
                ((2.0 * k + a + b) * (2.0 * k + a + b - 2.0) * r + a * a - b * b);
    double g0 = -2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b);
    double yk = (g1 * y1 + g0 * y0) / denom;
    y0 = y1;
    y1 = yk;
  }
  return y1;
}

}  // namespace detail

// P~_n^{(a,b)}(r), the Jacobi polynomial normalized so that
// P~_n^{(a,b)}(r) = ((a+1)_(n)/n!) 2F1(-n, a+b+n+1; a+1; (1-r)/2).
// For a=b=-1 the recurrence degenerates at k=2; the value there is pinned to
// (1-r^2)/4 so that x(1-x) P~_n^{(1,1)} = P~_{n+2}^{(-1,-1)} holds, which is
// the convention the transition-density expansions rely on.
inline double jacobi_eval(const JacobiParams& p, double r) {
  if (r < -1.0 || r > 1.0)
    throw std::domain_error("jacobi_eval: r must lie in [-1,1]");
  const double a = p.a, b = p.b;
  const int n = p.n;
  if (n == 0) return 1.0;
  if (a == -1.0 && b == -1.0) {
    if (n == 1) return 0.0;
    double y2 = (1.0 - r * r) / 4.0;
    if (n == 2) return y2;
    return detail::jacobi_recur_from(2, n, a, b, r, 0.0, y2);
  }
  double y1 = (a + 1.0) + (a + b + 2.0) * (r - 1.0) / 2.0;
  if (n == 1) return y1;
  return detail::jacobi_recur_from(1, n, a, b, r, 1.0, y1);
}

inline double jacobi_eval(double a, double b, int n, double r) {
  return jacobi_eval(JacobiParams(a, b, n), r);
}

// d/dr P~_n^{(a,b)}(r) = (n+a+b+1)/2 * P~_{n-1}^{(a+1,b+1)}(r).
inline double jacobi_deriv(double a, double b, int n, double r) {
  if (n == 0) return 0.0;
  return 0.5 * (n + a + b + 1.0) * jacobi_eval(a + 1.0, b + 1.0, n - 1, r);
}

// log of c_n(theta1,theta2) from the spectral expansion; positive for the
// index ranges that expansion uses (n>=1, or n>=2 when theta=0).
inline double log_spectral_coeff(int n, double theta1, double theta2) {
  double theta = theta1 + theta2;
  if (n == 0) return std::lgamma(theta) - std::lgamma(theta1) - std::lgamma(theta2);
  return std::lgamma(n + 1.0) + std::lgamma(n + theta - 1.0) +
         std::log(2.0 * n + theta - 1.0) - std::lgamma(n + theta1) -
         std::lgamma(n + theta2);
}

inline double log_beta_fn(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Orthonormal polynomial on the Beta(theta1,theta2) weight:
// Phat_n(x) = sqrt(B(theta1,theta2) c_n) P~_n^{(theta2-1,theta1-1)}(2x-1).
inline double jacobi_orthonormal(const MutationPair& theta, int n, double x) {
  if (!(theta.theta1 > 0.0 && theta.theta2 > 0.0))
    throw std::domain_error(
        "jacobi_orthonormal: requires both mutation rates > 0");
  if (n < 0) throw std::domain_error("jacobi_orthonormal: n must be >= 0");
  if (n == 0) return 1.0;
  double logc = log_spectral_coeff(n, theta.theta1, theta.theta2) +
                log_beta_fn(theta.theta1, theta.theta2);
  return std::exp(0.5 * logc) *
         jacobi_eval(theta.theta2 - 1.0, theta.theta1 - 1.0, n, 2.0 * x - 1.0);
}

// Beta(a,b) density, log-space. On the boundary: 0 when the local exponent
// exceeds 1 (density vanishes), error when it is below 1 (density diverges).
inline double beta_density(double a, double b, double y) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("beta_density: parameters must be > 0");
  if (y < 0.0 || y > 1.0)
    throw std::domain_error("beta_density: y must lie in [0,1]");
  if (y == 0.0) {
    if (a < 1.0) throw std::domain_error("beta_density: diverges at y=0");
    if (a > 1.0) return 0.0;
    return std::exp(-log_beta_fn(a, b));  // a == 1
  }
  if (y == 1.0) {
    if (b < 1.0) throw std::domain_error("beta_density: diverges at y=1");
    if (b > 1.0) return 0.0;
    return std::exp(-log_beta_fn(a, b));
  }
  return std::exp((a - 1.0) * std::log(y) + (b - 1.0) * std::log1p(-y) -
                  log_beta_fn(a, b));
}

namespace detail {

// Kummer 1F1(a;b;z) by direct series; z<0 via 1F1(a;b;z)=e^z 1F1(b-a;b;-z)
// to keep all terms positive.
inline double hyp1f1_series(double a, double b, double z) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 10000; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1.0);
    sum += term;
    if (std::fabs(term) < 1e-15 * std::fabs(sum)) break;
  }
  return sum;
}

}  // namespace detail

inline double hyp1f1(double a, double b, double z) {
  if (z < 0.0) return std::exp(z) * detail::hyp1f1_series(b - a, b, -z);
  return detail::hyp1f1_series(a, b, z);
}

// c(theta) = E[e^{gamma X}], X ~ Beta(theta1,theta2): 1F1(theta1; theta; gamma).
inline double selection_normalizer(const MutationPair& theta, double gamma) {
  if (!(theta.theta1 > 0.0 && theta.theta2 > 0.0))
    throw std::domain_error("selection_normalizer: requires both rates > 0");
  return hyp1f1(theta.theta1, theta.theta(), gamma);
}

}  // namespace wf
