// Quadrature support: tanh-sinh for (0,1) integrals with endpoint
// singularities, Gauss-Legendre panels for smooth CDF tables, and
// Gauss-Jacobi rules (Golub-Welsch) for weighted eigenproblem integrals.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace wf {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
};

// Integrand is called as f(y, one_minus_y); the second argument is exact near
// the right endpoint where 1-y underflows in naive form.
inline QuadResult integrate01(const std::function<double(double, double)>& f,
                              double tol = 1e-11, int max_level = 12) {
  // tanh-sinh: y = (1 + tanh((pi/2) sinh(u))) / 2 on u in (-umax, umax).
  const double umax = 3.7;
  auto node = [&](double u, double& y, double& omy, double& w) {
    double s = std::sinh(u);
    double c = std::cosh(u);
    double t = std::tanh(1.5707963267948966 * s);
    y = 0.5 * (1.0 + t);
    // 1 - y = 0.5*(1 - tanh) = exp(-pi*s)/(1+exp(-pi*s)) stays accurate
    double e = std::exp(-3.141592653589793 * s);
    omy = e / (1.0 + e);
    double sech = 1.0 / std::cosh(1.5707963267948966 * s);
    w = 0.25 * 3.141592653589793 * c * sech * sech;
  };
  double h = 1.0;
  double y, omy, w;
  node(0.0, y, omy, w);
  double sum = f(y, omy) * w;
  double prev = sum * 2.0 * h;  // force at least two refinements
  QuadResult out;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    // add the new (odd-index) nodes of this level
    double add = 0.0;
    for (double u = h; u <= umax; u += 2.0 * h) {
      node(u, y, omy, w);
      if (w > 1e-300) {
        if (y < 1.0 && y > 0.0) add += f(y, omy) * w;
        node(-u, y, omy, w);
        if (y > 0.0 && y < 1.0) add += f(y, omy) * w;
      } else {
        break;
      }
    }
    sum += add;
    double cur = sum * h;
    out.error_estimate = std::fabs(cur - prev);
    out.value = cur;
    out.levels = level;
    if (level >= 3 && out.error_estimate <= tol * std::max(1.0, std::fabs(cur)))
      break;
    prev = cur;
  }
  return out;
}

inline double integrate01v(const std::function<double(double)>& f,
                           double tol = 1e-11) {
  return integrate01([&](double y, double) { return f(y); }, tol).value;
}

// Nodes/weights of an n-point Gauss rule for weight x^beta (1-x)^alpha on
// (0,1), via Golub-Welsch on the Jacobi(alpha,beta) recurrence.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline GaussRule gauss_jacobi01(int n, double alpha, double beta) {
  // Golub-Welsch on the monic Jacobi(alpha,beta) recurrence (Gautschi).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  double ab = alpha + beta;
  J(0, 0) = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    J(k, k) = (beta * beta - alpha * alpha) / den;
    double b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                ((2.0 * k + ab) * (2.0 * k + ab) * (2.0 * k + ab + 1.0) *
                 (2.0 * k + ab - 1.0));
    double s = std::sqrt(b2);
    J(k - 1, k) = s;
    J(k, k - 1) = s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  // After mapping x=(1+r)/2 the rule integrates f against x^beta (1-x)^alpha
  // on (0,1); total weight is B(alpha+1, beta+1).
  double logB = std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                std::lgamma(ab + 2.0);
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.x[k] = 0.5 * (1.0 + es.eigenvalues()(k));
    double v = es.eigenvectors()(0, k);
    rule.w[k] = std::exp(logB) * v * v;
  }
  return rule;
}

inline GaussRule gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0, 0.0); }

// Cumulative distribution table of a density on (0,1): panelwise Gauss and
// linear interpolation. Accuracy ~1e-9 for the smooth densities used here.
class CdfTable {
 public:
  CdfTable(const std::function<double(double)>& density, int cells = 4096,
           int panel_order = 8) {
    GaussRule g = gauss_legendre01(panel_order);
    grid_.resize(cells + 1);
    cdf_.resize(cells + 1);
    cdf_[0] = 0.0;
    double h = 1.0 / cells;
    for (int i = 0; i < cells; ++i) {
      grid_[i] = i * h;
      double s = 0.0;
      for (size_t k = 0; k < g.x.size(); ++k)
        s += g.w[k] * density(grid_[i] + h * g.x[k]);
      cdf_[i + 1] = cdf_[i] + s * h;
    }
    grid_[cells] = 1.0;
    total_ = cdf_[cells];
  }

  double total_mass() const { return total_; }

  // CDF normalized to 1 at the right end.
  double operator()(double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double pos = y * (grid_.size() - 1);
    size_t i = static_cast<size_t>(pos);
    if (i >= grid_.size() - 1) i = grid_.size() - 2;
    double frac = pos - i;
    return (cdf_[i] * (1.0 - frac) + cdf_[i + 1] * frac) / total_;
  }

 private:
  std::vector<double> grid_, cdf_;
  double total_ = 0.0;
};

}  // namespace wf
