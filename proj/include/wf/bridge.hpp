// Bridge densities for the neutral diffusion: the transition-density ratio
// for general endpoints (through the recurrent-mutation h-transform forms so
// boundary endpoints stay well defined), the closed (0,0) forms, the bridge
// mean and the large-T interior limit.
#pragma once

#include "wf/coalescent.hpp"
#include "wf/wf_density.hpp"

#include <cmath>
#include <stdexcept>

namespace wf {

struct BridgeSpec {
  double x;
  double z;
  double T;
  double t;
  MutationPair theta;
  double gamma = 0.0;

  BridgeSpec(double x_, double z_, double T_, double t_, MutationPair th,
             double gamma_ = 0.0)
      : x(x_), z(z_), T(T_), t(t_), theta(th), gamma(gamma_) {
    if (x < 0.0 || x > 1.0 || z < 0.0 || z > 1.0)
      throw std::domain_error("BridgeSpec: endpoints in [0,1]");
    if (!(0.0 < t && t < T)) throw std::domain_error("BridgeSpec: 0 < t < T");
  }
};

namespace detail {

inline double ratio_density(double x, double z, double T, double t,
                            const MutationPair& th, double y) {
  double num = transition_density(x, y, t, th) *
               transition_density(y, z, T - t, th);
  return num / transition_density(x, z, T, th);
}

}  // namespace detail

// Theorem-2 form: y(1-y) g(y;t) g(y;T-t) / h(T), the (0,0) bridge without
// mutation.
inline double bridge_density_00(double y, double t, double T) {
  if (y <= 0.0 || y >= 1.0) throw std::domain_error("bridge_density_00: y in (0,1)");
  double h = h_certified(0.0, T).value;
  return y * (1.0 - y) * g_series(y, t) * g_series(y, T - t) / h;
}

// Theorem-3 form for mutation away from the allele at rate theta/2.
inline double bridge_density_0theta(double y, double t, double T, double theta) {
  if (y <= 0.0 || y >= 1.0)
    throw std::domain_error("bridge_density_0theta: y in (0,1)");
  double h = h_certified(theta, T).value;
  return y * std::pow(1.0 - y, 1.0 - theta) * g_theta_series(y, t, theta) *
         g_theta_series(y, T - t, theta) / h;
}

// Density of the bridge at interior y. Dispatch:
//  - x=z=0 with theta1=0: the closed limit formulas above;
//  - theta1=0 otherwise: transition ratio through the (2,theta)/(2,2)
//    transformed densities, well defined for endpoints on the boundary;
//  - both rates positive: direct transition ratio;
//  - theta2=0 with a boundary endpoint: rejected (no stated form).
inline double bridge_density(const BridgeSpec& spec, double y) {
  if (y <= 0.0 || y >= 1.0) throw std::domain_error("bridge_density: y in (0,1)");
  if (spec.gamma != 0.0)
    throw std::domain_error("bridge_density: gamma != 0 belongs to the selection module");
  const MutationPair& th = spec.theta;
  if (th.theta1 == 0.0) {
    if (spec.x == 0.0 && spec.z == 0.0) {
      if (th.theta2 == 0.0) return bridge_density_00(y, spec.t, spec.T);
      return bridge_density_0theta(y, spec.t, spec.T, th.theta2);
    }
    MutationPair lifted(2.0, th.theta2 == 0.0 ? 2.0 : th.theta2);
    return detail::ratio_density(spec.x, spec.z, spec.T, spec.t, lifted, y);
  }
  if (th.theta2 == 0.0) {
    bool interior = spec.x > 0.0 && spec.x < 1.0 && spec.z > 0.0 && spec.z < 1.0;
    if (!interior)
      throw std::domain_error(
          "bridge_density: boundary endpoints with theta2=0 unsupported");
    return detail::ratio_density(spec.x, spec.z, spec.T, spec.t, th, y);
  }
  return detail::ratio_density(spec.x, spec.z, spec.T, spec.t, th, y);
}

// Theorem-1 ratio evaluated with the raw (untransformed) densities; interior
// endpoints only. Cross-validation partner of bridge_density.
inline double bridge_density_raw_ratio(const BridgeSpec& spec, double y) {
  bool interior = spec.x > 0.0 && spec.x < 1.0 && spec.z > 0.0 && spec.z < 1.0;
  if (!interior)
    throw std::domain_error("bridge_density_raw_ratio: interior endpoints only");
  return detail::ratio_density(spec.x, spec.z, spec.T, spec.t, spec.theta, y);
}

// Mean of the (0,0) bridge with mutation rate theta >= 0: the double series
// sum_{l,m} 2 l(l+theta-1) m(m+theta-1) / ((l+m+theta)(l+m+theta-1)(l+m+theta-2))
//   q_l(t) q_m(T-t) / h^theta(T),
// summed over diagonals so the t <-> T-t symmetry is exact in fp.
inline double bridge_mean(double theta, double t, double T, double tol = 1e-9) {
  if (theta < 0.0) throw std::domain_error("bridge_mean: theta >= 0");
  if (!(0.0 < t && t < T)) throw std::domain_error("bridge_mean: 0 < t < T");
  const double h = h_certified(theta, T).value;
  const double A_t = factorial_moment(2, theta, t) + theta * factorial_moment(1, theta, t);
  const double A_Tt =
      factorial_moment(2, theta, T - t) + theta * factorial_moment(1, theta, T - t);
  std::vector<double> q_t, q_Tt;    // index l-1 holds q_l
  std::vector<double> cum_t{0.0}, cum_Tt{0.0};  // prefix sums of l(l+theta-1)q_l
  auto extend = [&](std::vector<double>& v, std::vector<double>& cum, double tau,
                    int upto) {
    while (static_cast<int>(v.size()) < upto) {
      int l = static_cast<int>(v.size()) + 1;
      v.push_back(q(l, theta, tau, 1e-14).value);
      cum.push_back(cum.back() + l * (l + theta - 1.0) * v.back());
    }
  };
  double sum = 0.0;
  for (int d = 2; d < 3000; ++d) {  // diagonal l+m = d
    extend(q_t, cum_t, t, d - 1);
    extend(q_Tt, cum_Tt, T - t, d - 1);
    double diag = 0.0;
    double denom = (d + theta) * (d + theta - 1.0) * (d + theta - 2.0);
    for (int l = 1; 2 * l <= d; ++l) {  // pair (l, d-l) with its mirror
      int m = d - l;
      double w = 2.0 * l * (l + theta - 1.0) * m * (m + theta - 1.0) / denom;
      double cross = q_t[l - 1] * q_Tt[m - 1];
      if (l != m) cross += q_t[m - 1] * q_Tt[l - 1];
      diag += w * cross;
    }
    sum += diag;
    // pairs with l+m >= d+1 all have max(l,m) >= ceil((d+1)/2)
    int hf = (d + 1 + 1) / 2 - 1;  // ceil((d+1)/2) - 1, <= d-1
    double denom_next = (d + 1 + theta) * (d + theta) * (d + theta - 1.0);
    double ex_t = std::max(0.0, A_t - cum_t[hf]);
    double ex_Tt = std::max(0.0, A_Tt - cum_Tt[hf]);
    double tail = 2.0 * (ex_t * A_Tt + A_t * ex_Tt) / denom_next;
    if (d > 4 && tail < tol * h) return sum / h;
  }
  throw std::runtime_error("bridge_mean: tail did not close");
}

// Interior law of the bridge at mid-times as T grows: Beta(2, theta) with
// theta=0 read as Beta(2,2), i.e. 6y(1-y).
inline double bridge_limit_density(const MutationPair& th, double y) {
  if (y <= 0.0 || y >= 1.0)
    throw std::domain_error("bridge_limit_density: y in (0,1)");
  if (th.theta1 != 0.0)
    throw std::domain_error("bridge_limit_density: theta1 must be 0");
  double theta = th.theta2 == 0.0 ? 2.0 : th.theta2;
  return theta * (theta + 1.0) * y * std::pow(1.0 - y, theta - 1.0);
}

}  // namespace wf
