#include "wf/orthopoly.hpp"
#include "wf/quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace wf;

namespace {

// Independent oracle: terminating 2F1 sum of the defining expression,
// P~_n = ((a+1)_(n)/n!) 2F1(-n, a+b+n+1; a+1; (1-r)/2). Valid when a+1 is
// not a nonpositive integer reached by the sum.
double jacobi_2f1(int n, double a, double b, double r) {
  double u = (1.0 - r) / 2.0;
  double term = 1.0, f = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (-n + k) * (a + b + n + 1 + k) / ((a + 1 + k) * (k + 1.0)) * u;
    f += term;
  }
  double pref = 1.0;
  for (int k = 0; k < n; ++k) pref *= (a + 1 + k) / (k + 1.0);
  return pref * f;
}

}  // namespace

TEST_CASE("jacobi_eval basics") {
  REQUIRE(jacobi_eval(1.0, 1.0, 0, 0.3) == 1.0);
  // n=1 closed form: 2 + 4 (r-1)/2 = 2r
  for (double r : {-0.9, -0.2, 0.0, 0.55, 1.0})
    REQUIRE(jacobi_eval(1.0, 1.0, 1, r) == Catch::Approx(2.0 * r).margin(1e-14));
  // degree-(-1,-1) corner pinned by the product identity
  double r0 = -0.4, x0 = (r0 + 1.0) / 2.0;
  REQUIRE(jacobi_eval(-1.0, -1.0, 3, r0) ==
          Catch::Approx(x0 * (1.0 - x0) * jacobi_eval(1.0, 1.0, 1, r0)).epsilon(1e-14));
  REQUIRE_THROWS_AS(jacobi_eval(1.0, 1.0, 2, 1.5), std::domain_error);
  REQUIRE_THROWS_AS(JacobiParams(-1.5, 0.0, 2), std::domain_error);
}

TEST_CASE("recurrence matches 2F1 summation to 1e-10") {
  std::vector<std::pair<double, double>> params = {
      {1.0, 1.0}, {0.5, 2.5}, {2.0, 0.0}, {3.0, -0.5}, {0.0, 0.0}};
  for (auto [a, b] : params) {
    for (int n = 0; n <= 50; ++n) {
      for (int i = 0; i <= 100; i += 10) {
        double r = -1.0 + 0.02 * i;
        double v1 = jacobi_eval(a, b, n, r);
        double v2 = jacobi_2f1(n, a, b, r);
        double scale = std::max({1.0, std::fabs(v1), std::fabs(v2)});
        REQUIRE(std::fabs(v1 - v2) / scale < 1e-10);
      }
    }
  }
}

TEST_CASE("product identity x(1-x) P_n^{(1,1)} = P_{n+2}^{(-1,-1)}") {
  for (int n = 0; n <= 30; ++n) {
    for (int i = 1; i < 20; ++i) {
      double x = i / 20.0;
      double r = 2.0 * x - 1.0;
      double lhs = x * (1.0 - x) * jacobi_eval(1.0, 1.0, n, r);
      double rhs = jacobi_eval(-1.0, -1.0, n + 2, r);
      double scale = std::max(1e-30, std::fabs(lhs));
      REQUIRE(std::fabs(lhs - rhs) / scale < 1e-11);
    }
  }
}

TEST_CASE("shift identity x P_n^{(th-1,1)} = (n+1)/(n+th) P_{n+1}^{(th-1,-1)}") {
  for (double th : {0.5, 1.0, 2.0, 5.0}) {
    for (int n = 0; n <= 30; ++n) {
      for (int i = 1; i < 20; ++i) {
        double x = i / 20.0;
        double r = 2.0 * x - 1.0;
        double lhs = x * jacobi_eval(th - 1.0, 1.0, n, r);
        double rhs = (n + 1.0) / (n + th) * jacobi_eval(th - 1.0, -1.0, n + 1, r);
        double scale = std::max(1e-30, std::fabs(lhs));
        REQUIRE(std::fabs(lhs - rhs) / scale < 1e-11);
      }
    }
  }
}

TEST_CASE("jacobi derivative by finite differences") {
  for (double r : {-0.6, 0.1, 0.8}) {
    double h = 1e-6;
    double fd = (jacobi_eval(1.0, 2.0, 7, r + h) - jacobi_eval(1.0, 2.0, 7, r - h)) /
                (2.0 * h);
    REQUIRE(jacobi_deriv(1.0, 2.0, 7, r) == Catch::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("orthonormal polynomials: unit norm and orthogonality") {
  MutationPair th(2.0, 2.0);
  auto weighted = [&](int n, int m) {
    return integrate01([&](double y, double omy) {
      return jacobi_orthonormal(th, n, y) * jacobi_orthonormal(th, m, y) *
             std::exp(std::log(y) + std::log(omy) - log_beta_fn(2.0, 2.0));
    }, 1e-13).value;
  };
  REQUIRE(jacobi_orthonormal(MutationPair(1.0, 1.0), 0, 0.77) == 1.0);
  REQUIRE(weighted(3, 3) == Catch::Approx(1.0).epsilon(1e-11));
  REQUIRE(std::fabs(weighted(2, 3)) < 1e-12);
  REQUIRE_THROWS_AS(jacobi_orthonormal(MutationPair(0.0, 1.0), 1, 0.5),
                    std::domain_error);
}

TEST_CASE("beta_density values and normalization") {
  REQUIRE(beta_density(2.0, 2.0, 0.5) == Catch::Approx(1.5).epsilon(1e-14));
  REQUIRE(beta_density(1.0, 1.0, 0.73) == Catch::Approx(1.0).epsilon(1e-14));
  auto I = integrate01([](double y, double omy) {
    return std::exp(std::log(y) + 49.0 * std::log(omy) -
                    log_beta_fn(2.0, 50.0));
  }, 1e-12);
  REQUIRE(I.value == Catch::Approx(1.0).epsilon(1e-10));
  // boundary handling
  REQUIRE(beta_density(2.0, 3.0, 0.0) == 0.0);
  REQUIRE(beta_density(1.0, 3.0, 0.0) == Catch::Approx(3.0));
  REQUIRE_THROWS_AS(beta_density(0.5, 1.0, 0.0), std::domain_error);
  REQUIRE_THROWS_AS(beta_density(-1.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("factorial symbols") {
  REQUIRE(rising(3.0, 0) == 1.0);
  REQUIRE(falling(3.0, 0) == 1.0);
  REQUIRE(rising(2.5, 3) == Catch::Approx(2.5 * 3.5 * 4.5));
  REQUIRE(falling(5.0, 3) == Catch::Approx(60.0));
}

TEST_CASE("selection normalizer") {
  // uniform X: (e^g - 1)/g
  for (double g : {-2.0, 0.5, 3.0})
    REQUIRE(selection_normalizer(MutationPair(1.0, 1.0), g) ==
            Catch::Approx((std::exp(g) - 1.0) / g).epsilon(1e-13));
  REQUIRE(selection_normalizer(MutationPair(0.3, 4.0), 0.0) == 1.0);
  // quadrature oracle for theta=(1,3), gamma=2
  auto I = integrate01([](double y, double omy) {
    return std::exp(2.0 * y) * 3.0 * omy * omy;
  }, 1e-13);
  REQUIRE(selection_normalizer(MutationPair(1.0, 3.0), 2.0) ==
          Catch::Approx(I.value).epsilon(1e-12));
  // increasing in gamma
  double prev = 0.0;
  for (double g = -2.0; g <= 2.01; g += 0.5) {
    double v = selection_normalizer(MutationPair(1.5, 0.7), g);
    REQUIRE(v > prev);
    prev = v;
  }
}
