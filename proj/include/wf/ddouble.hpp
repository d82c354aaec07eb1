// Double-double arithmetic: an unevaluated sum hi+lo of two doubles giving
// ~31 significant digits. Used where alternating series cancel far beyond
// double precision (coalescent transition functions at small t).
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace wf {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
  explicit operator double() const { return hi + lo; }
};

namespace detail {

// Knuth two-sum: a+b = s + err exactly.
inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

// |a| >= |b| assumed.
inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

// a*b = p + err exactly (fma).
inline dd two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}

}  // namespace detail

inline dd operator+(dd a, dd b) {
  dd s = detail::two_sum(a.hi, b.hi);
  double lo = s.lo + (a.lo + b.lo);
  return detail::quick_two_sum(s.hi, lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = detail::two_prod(a.hi, b.hi);
  double lo = p.lo + (a.hi * b.lo + a.lo * b.hi);
  return detail::quick_two_sum(p.hi, lo);
}

inline dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = a - dd(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - dd(q2) * b;
  double q3 = r.hi / b.hi;
  dd s = detail::quick_two_sum(q1, q2);
  return s + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }

inline dd fabs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline dd ldexp(dd a, int n) { return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)}; }

// exp for dd arguments. Range-reduce x = n*ln2 + r, |r| <= ln2/2, then a
// Taylor series in dd. Accurate to ~1e-31 relative over the range used here.
inline dd exp(dd x) {
  static constexpr dd kLn2{6.931471805599453e-01, 2.3190468138462996e-17};
  if (x.hi < -709.0) return dd(0.0);
  if (x.hi > 709.0) return dd(std::numeric_limits<double>::infinity());
  int n = static_cast<int>(std::nearbyint(x.hi / kLn2.hi));
  dd r = x - dd(static_cast<double>(n)) * kLn2;
  // exp(r) = 1 + r + r^2/2! + ...
  dd term = r;
  dd sum = dd(1.0) + r;
  for (int k = 2; k <= 22; ++k) {
    term = term * r / dd(static_cast<double>(k));
    sum += term;
    if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
  }
  return ldexp(sum, n);
}

}  // namespace wf
