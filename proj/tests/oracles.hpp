// Test-side oracles, independent of the library's evaluation paths.
#pragma once

#include <cmath>
#include <vector>

namespace wf_test {

// Marginal law at time t of the pure-death chain started at n0 lineages with
// death rates r_j = j(j+theta-1)/2: dense RK4 with rate-limited steps.
// Returns p[0..n0]. Independent finite-chain oracle for q_l^theta(t).
inline std::vector<double> death_chain_marginal(int n0, double theta, double t,
                                                double dt_factor = 0.05) {
  std::vector<double> p(n0 + 1, 0.0), k1(n0 + 1), k2(n0 + 1), k3(n0 + 1),
      k4(n0 + 1), tmp(n0 + 1);
  p[n0] = 1.0;
  auto rate = [&](int j) { return 0.5 * j * (j + theta - 1.0); };
  auto deriv = [&](const std::vector<double>& s, std::vector<double>& d) {
    for (int j = 0; j <= n0; ++j) {
      d[j] = -rate(j) * s[j];
      if (j + 1 <= n0) d[j] += rate(j + 1) * s[j + 1];
    }
  };
  double time = 0.0;
  int top = n0;
  while (time < t) {
    while (top > 1 && p[top] < 1e-300) --top;
    double rmax = rate(top);
    double dt = std::min(dt_factor / std::max(rmax, 1.0), t - time);
    deriv(p, k1);
    for (int j = 0; j <= n0; ++j) tmp[j] = p[j] + 0.5 * dt * k1[j];
    deriv(tmp, k2);
    for (int j = 0; j <= n0; ++j) tmp[j] = p[j] + 0.5 * dt * k2[j];
    deriv(tmp, k3);
    for (int j = 0; j <= n0; ++j) tmp[j] = p[j] + dt * k3[j];
    deriv(tmp, k4);
    for (int j = 0; j <= n0; ++j)
      p[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    time += dt;
  }
  return p;
}

}  // namespace wf_test
