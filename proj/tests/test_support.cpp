#include "wf/ddouble.hpp"
#include "wf/quadrature.hpp"
#include "wf/rng.hpp"
#include "wf/stats.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace wf;

TEST_CASE("dd arithmetic beats double rounding") {
  dd a(1.0);
  dd third = a / dd(3.0);
  dd back = third * dd(3.0);
  REQUIRE(std::fabs((back - dd(1.0)).to_double()) < 1e-30);

  // (1 + 1e-20) - 1 survives in dd
  dd x = dd(1.0) + dd(1e-20);
  REQUIRE((x - dd(1.0)).to_double() == Catch::Approx(1e-20).epsilon(1e-12));
}

TEST_CASE("dd exp matches double exp and keeps extra digits") {
  for (double v : {-35.2, -2.0, -1e-3, 0.0, 0.7, 20.0}) {
    dd e = wf::exp(dd(v));
    REQUIRE(e.to_double() == Catch::Approx(std::exp(v)).epsilon(1e-14));
  }
  // exp(1) to dd accuracy
  dd e1 = wf::exp(dd(1.0));
  REQUIRE(std::fabs(e1.hi - 2.718281828459045) < 1e-15);
  REQUIRE(std::fabs(e1.hi + e1.lo - 2.718281828459045) < 3e-16);
}

TEST_CASE("tanh-sinh integrates endpoint singularities") {
  // int_0^1 y^{-1/2} dy = 2
  auto r = integrate01([](double y, double) { return 1.0 / std::sqrt(y); });
  REQUIRE(r.value == Catch::Approx(2.0).epsilon(1e-11));
  // int_0^1 y^{-1/2}(1-y)^{-1/2} = pi
  auto r2 = integrate01(
      [](double y, double omy) { return 1.0 / std::sqrt(y * omy); });
  REQUIRE(r2.value == Catch::Approx(3.14159265358979).epsilon(1e-11));
  // smooth case
  auto r3 = integrate01([](double y, double) { return std::exp(2.0 * y); });
  REQUIRE(r3.value == Catch::Approx((std::exp(2.0) - 1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("gauss-jacobi rules integrate weighted monomials exactly") {
  // weight x^1 (1-x)^2.5 on (0,1), n=8 exact for poly deg <= 15
  GaussRule g = gauss_jacobi01(8, 2.5, 1.0);
  double s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 5);
  // int x^{5+1}(1-x)^{2.5} dx = B(7, 3.5)
  double expect = std::exp(std::lgamma(7.0) + std::lgamma(3.5) - std::lgamma(10.5));
  REQUIRE(s == Catch::Approx(expect).epsilon(1e-13));

  GaussRule leg = gauss_legendre01(6);
  double s2 = 0.0;
  for (size_t i = 0; i < leg.x.size(); ++i) s2 += leg.w[i] * std::pow(leg.x[i], 9);
  REQUIRE(s2 == Catch::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("incomplete beta and gamma agree with closed forms") {
  REQUIRE(inc_beta(1.0, 1.0, 0.37) == Catch::Approx(0.37).epsilon(1e-13));
  REQUIRE(inc_beta(2.0, 2.0, 0.5) == Catch::Approx(0.5).epsilon(1e-13));
  // I_x(2,2) = x^2(3-2x)
  double x = 0.3;
  REQUIRE(inc_beta(2.0, 2.0, x) == Catch::Approx(x * x * (3 - 2 * x)).epsilon(1e-12));
  // P(1, x) = 1 - e^{-x}
  REQUIRE(gamma_p(1.0, 0.8) == Catch::Approx(1.0 - std::exp(-0.8)).epsilon(1e-13));
  // chi2 p-value with 2 dof: exp(-stat/2)
  REQUIRE(chi2_pvalue(3.0, 2) == Catch::Approx(std::exp(-1.5)).epsilon(1e-12));
}

TEST_CASE("random stream is reproducible and distributions behave") {
  RandomStream r1(1234), r2(1234);
  for (int i = 0; i < 1000; ++i) REQUIRE(r1.u01() == r2.u01());

  RandomStream r(99);
  double mean = 0.0, var = 0.0;
  const int n = 200000;
  std::vector<double> normals(n);
  for (int i = 0; i < n; ++i) normals[i] = r.normal();
  for (double v : normals) mean += v;
  mean /= n;
  for (double v : normals) var += (v - mean) * (v - mean);
  var /= n - 1;
  REQUIRE(std::fabs(mean) < 0.01);
  REQUIRE(var == Catch::Approx(1.0).margin(0.02));

  // Beta(2,3) via gammas: KS against the closed-form CDF
  std::vector<double> bs(20000);
  RandomStream rb(7);
  for (auto& v : bs) v = rb.beta(2.0, 3.0);
  double d = ks_distance(bs, [](double y) { return inc_beta(2.0, 3.0, y); });
  REQUIRE(d < ks_critical(0.001, bs.size()));

  // substreams differ from each other and the parent
  RandomStream s0 = r.substream(0), s1 = r.substream(1);
  REQUIRE(s0.u01() != s1.u01());
}

TEST_CASE("ks critical values") {
  REQUIRE(ks_critical(0.001, 200000) == Catch::Approx(1.9495 / std::sqrt(200000.0)).epsilon(1e-3));
}
