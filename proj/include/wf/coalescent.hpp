// Lineage-count process L^theta(t) started from an entrance boundary at
// infinity: transition functions q_l^theta(t) wrapped in certified monotone
// envelopes, factorial moments, the h^theta(T) normalizer and the two-time
// conditional lineage law.
//
// The alternating series behind q_l is summed in double-double arithmetic:
// at small t the largest term exceeds the sum by many orders of magnitude
// and plain doubles cannot reach the 1e-8 accuracy the envelopes promise.
#pragma once

#include "wf/ddouble.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wf {

struct CertifiedValue {
  double value = 0.0;
  double error_bound = 0.0;       // half-width of the certified interval
  bool tolerance_met = true;      // false when fp noise floor was hit first
};

struct EnvelopePair {
  std::vector<double> lower;      // indexed by refinement k
  std::vector<double> upper;
  int valid_from = 0;             // monotone for k >= valid_from
};

inline double rho(int k, double theta, double t) {
  if (k < 0 || theta < 0.0 || t <= 0.0)
    throw std::domain_error("rho: need k>=0, theta>=0, t>0");
  return std::exp(-0.5 * k * (k + theta - 1.0) * t);
}

// C_l^{(t,theta)}: first i >= l beyond which the alternating-series bounds
// become monotone in the refinement index.
inline int q_threshold(int l, double theta, double t) {
  if (t <= 0.0) throw std::domain_error("q_threshold: t must be > 0");
  for (int i = l;; ++i) {
    double den1 = static_cast<double>(i - l + 1);
    double den2 = theta + 2.0 * i - 1.0;
    if (den2 == 0.0) continue;  // ratio infinite, condition fails
    double v = (theta + i + l - 1.0) / den1 * (theta + 2.0 * i + 1.0) / den2 *
               std::exp(-(i + theta / 2.0) * t);
    if (v < 1.0 && v >= 0.0) return i;
    if (i > l + 100000) throw std::runtime_error("q_threshold: no convergence");
  }
}

namespace detail {

// Incremental evaluator of the alternating series for q_l^theta(t) in dd.
// Terms are rho_j(t) * (2j+theta-1)(l+theta)_(j-1) / (l! (j-l)!), j >= l,
// with alternating signs. Partial sums S_i include terms j = l..l+i.
class QSeries {
 public:
  QSeries(int l, double theta, double t)
      : l_(l), theta_(theta), t_(t), efac_(wf::exp(dd(-t))) {
    if (l < 0 || theta < 0.0 || t <= 0.0)
      throw std::domain_error("QSeries: need l>=0, theta>=0, t>0");
    // coefficient at j = l
    dd coef(1.0);
    if (l_ == 0) {
      coef = dd(1.0);  // (theta-1)*(theta)_(-1) limit, any theta
    } else {
      // (2l+theta-1) * (l+theta)_(l-1) / l!, interleaved against overflow
      coef = dd(2.0 * l_ + theta_ - 1.0);
      for (int i = 0; i < l_ - 1; ++i)
        coef = coef * dd(l_ + theta_ + i) / dd(static_cast<double>(i + 1));
      coef = coef / dd(static_cast<double>(l_));
    }
    term_ = wf::exp(dd(-0.5 * l_ * (l_ + theta_ - 1.0) * t_)) * coef;
    rho_ratio_ = wf::exp(dd(-(l_ + theta_ / 2.0) * t_));
    sum_ = term_;
    abs_sum_ = fabs(term_);
    psums_.push_back(sum_);
    j_ = l_;
  }

  // Extend so that partial sums S_0..S_i are available.
  void extend_to(int i) {
    while (static_cast<int>(psums_.size()) <= i) step();
  }

  // Envelope after k refinements: upper has 2k extra terms, lower 2k+1.
  // Widened outward by the accumulated dd rounding and 4 ulp.
  std::pair<double, double> envelope(int k) {
    extend_to(2 * k + 1);
    double widen = widen_margin();
    double lo = psums_[2 * k + 1].to_double() - widen;
    double hi = psums_[2 * k].to_double() + widen;
    return {lo, hi};
  }

  int threshold_k() {
    if (k0_ < 0) {
      int c = q_threshold(l_, theta_, t_);
      k0_ = std::max(0, (c - l_ + 1) / 2);
    }
    return k0_;
  }

  // Refine past the monotone threshold until the envelope is narrower than
  // tol (absolute) or the fp floor is reached.
  CertifiedValue certified(double tol) {
    int k = threshold_k();
    CertifiedValue out;
    double prev_width = HUGE_VAL;
    for (;; ++k) {
      auto [lo, hi] = envelope(k);
      double width = hi - lo;
      if (width <= tol || (width >= prev_width && width < 1e-13) ||
          k > threshold_k() + 4000) {
        double mid = 0.5 * (lo + hi);
        out.value = std::min(1.0, std::max(0.0, mid));
        out.error_bound = std::max(0.5 * width, 0.0);
        out.tolerance_met = width <= tol;
        return out;
      }
      prev_width = width;
    }
  }

  int terms_used() const { return static_cast<int>(psums_.size()); }

 private:
  void step() {
    // ratio of coefficient j -> j+1: (2j+theta+1)(l+theta+j-1)/((2j+theta-1)(j+1-l))
    dd ratio;
    if (j_ == 0 && l_ == 0) {
      ratio = dd(theta_ + 1.0);  // cancelled form, valid for any theta
    } else {
      ratio = dd(2.0 * j_ + theta_ + 1.0) * dd(l_ + theta_ + j_ - 1.0) /
              (dd(2.0 * j_ + theta_ - 1.0) * dd(static_cast<double>(j_ + 1 - l_)));
    }
    term_ = term_ * ratio * rho_ratio_;
    rho_ratio_ = rho_ratio_ * efac_;
    ++j_;
    if ((j_ - l_) % 2 == 1)
      sum_ -= term_;
    else
      sum_ += term_;
    abs_sum_ += fabs(term_);
    psums_.push_back(sum_);
  }

  double widen_margin() const {
    // dd ops carry ~1e-31 relative error each; the series length and the
    // magnitude of the largest terms bound the accumulated noise.
    double noise = abs_sum_.to_double() * 1e-28 * (psums_.size() + 8.0);
    double ulp4 = 4.0 * std::ldexp(std::fabs(sum_.to_double()) +
                                       std::numeric_limits<double>::min(),
                                   -52);
    return noise + ulp4;
  }

  int l_;
  double theta_, t_;
  dd efac_;        // e^{-t}
  dd term_;        // |term| at current j (signs applied when accumulating)
  dd rho_ratio_;   // rho_{j+1}/rho_j = e^{-(j+theta/2)t}
  dd sum_;
  dd abs_sum_;
  std::vector<dd> psums_;
  int j_ = 0;
  int k0_ = -1;
};

}  // namespace detail

// Alternating-series envelope around q_l^theta(t) after k refinements.
// Monotone (and bracketing) once 2k+l clears the threshold; below it the
// bounds are still partial sums but carry no monotonicity promise.
struct QEnvelopeResult {
  double lower = 0.0;
  double upper = 0.0;
  bool monotone = false;
};

inline QEnvelopeResult q_envelope(int l, double theta, double t, int k) {
  detail::QSeries s(l, theta, t);
  auto [lo, hi] = s.envelope(k);
  QEnvelopeResult r;
  r.lower = lo;
  r.upper = hi;
  r.monotone = (2 * k + l >= q_threshold(l, theta, t));
  return r;
}

inline EnvelopePair q_envelope_sequence(int l, double theta, double t, int kmax) {
  detail::QSeries s(l, theta, t);
  EnvelopePair p;
  p.valid_from = s.threshold_k();
  for (int k = 0; k <= kmax; ++k) {
    auto [lo, hi] = s.envelope(k);
    p.lower.push_back(lo);
    p.upper.push_back(hi);
  }
  return p;
}

// Certified q_l^theta(t): midpoint of the refined envelope, clamped to [0,1].
inline CertifiedValue q(int l, double theta, double t, double tol = 1e-12) {
  detail::QSeries s(l, theta, t);
  return s.certified(tol);
}

// E[L^theta(t)_[k]] (falling factorial moment), direct positive series.
inline double factorial_moment(int k, double theta, double t) {
  if (k < 1) throw std::domain_error("factorial_moment: k >= 1");
  if (t <= 0.0) throw std::domain_error("factorial_moment: t > 0");
  double sum = 0.0;
  // term_l = rho_l (2l+theta-1) C(l-1,k-1) (theta+l)_(k-1)
  for (int l = k; l < 100000; ++l) {
    double logc = std::lgamma(l) - std::lgamma(k) - std::lgamma(l - k + 1);
    double logp = std::lgamma(theta + l + k - 1.0) - std::lgamma(theta + l);
    double term = std::exp(-0.5 * l * (l + theta - 1.0) * t + logc + logp) *
                  (2.0 * l + theta - 1.0);
    sum += term;
    if (l > k + 2 && term < 1e-16 * sum) break;
  }
  return sum;
}

// Sum_{l>L} l(l-1) q_l^theta(t), bounded through the second factorial moment.
// Used as the universal tail control for outer sums over q_l.
inline double excess_factorial_mass(double theta, double t, int L,
                                    double q_tol = 1e-13) {
  double total = factorial_moment(2, theta, t);
  double partial = 0.0;
  double err = 0.0;
  for (int l = 2; l <= L; ++l) {
    CertifiedValue cv = q(l, theta, t, q_tol);
    partial += l * (l - 1.0) * cv.value;
    err += l * (l - 1.0) * cv.error_bound;
  }
  return std::max(0.0, total - partial + err) + 1e-15 * total;
}

// D^{(theta,T)} below which the h-envelope tail bound is not yet valid.
inline double h_tail_threshold(double theta, double T) {
  return std::log(5.0) / T - theta / 2.0;
}

struct HEnvelopeResult {
  double lower = 0.0;
  double upper = 0.0;
  bool valid = false;
};

// Monotone bounds on h^theta(T) = sum_{l>=1} e^{-l(l+theta-1)T/2}(2l+theta-1) l(l+theta-1).
inline HEnvelopeResult h_envelope(double theta, double T, int k) {
  if (T <= 0.0) throw std::domain_error("h_envelope: T > 0");
  auto hterm = [&](int l) {
    return std::exp(-0.5 * l * (l + theta - 1.0) * T) * (2.0 * l + theta - 1.0) *
           l * (l + theta - 1.0);
  };
  HEnvelopeResult r;
  r.valid = k > std::max(2.0, h_tail_threshold(theta, T));
  double s = 0.0;
  for (int l = 1; l <= k; ++l) s += hterm(l);
  r.lower = s;
  double denom = 1.0 - 5.0 * std::exp(-(k + 1 + theta / 2.0) * T);
  r.upper = (denom > 0.0) ? s + hterm(k + 1) / denom : HUGE_VAL;
  return r;
}

inline CertifiedValue h_certified(double theta, double T, double tol = 1e-13) {
  int k = static_cast<int>(std::ceil(std::max(3.0, h_tail_threshold(theta, T) + 1.0)));
  for (;; ++k) {
    HEnvelopeResult r = h_envelope(theta, T, k);
    double width = r.upper - r.lower;
    if (r.valid && width <= tol * std::max(1.0, r.lower)) {
      CertifiedValue cv;
      cv.value = 0.5 * (r.lower + r.upper);
      cv.error_bound = 0.5 * width + 4.0 * std::ldexp(r.upper, -52);
      return cv;
    }
    if (k > 100000) throw std::runtime_error("h_certified: no convergence");
  }
}

// P(L^theta(T-s) = c | L^theta(t-s) = l) for s < t < T, Eq. with the
// binomial(l,c) prefactor; the m-sum is truncated once its geometric tail
// bound falls below 1e-14 of the total.
inline double conditional_lineages(int c, int l, double theta, double t,
                                   double s, double T) {
  if (!(s < t && t < T)) throw std::domain_error("conditional_lineages: s<t<T");
  if (c > l) return 0.0;
  if (c < 0 || l < 1) throw std::domain_error("conditional_lineages: need 1<=c<=l");
  double tau = T - t;
  double sum = 0.0, prev_term = -1.0;
  for (int m = c; m < 100000; ++m) {
    CertifiedValue qm = q(m, theta, tau, 1e-15);
    // m!/(m-c)! * Gamma(theta+m) / (Gamma(theta+c) (l+theta)_(m))
    double logw = std::lgamma(m + 1.0) - std::lgamma(m - c + 1.0) +
                  std::lgamma(theta + m) - std::lgamma(theta + c) -
                  (std::lgamma(l + theta + m) - std::lgamma(l + theta));
    double term = qm.value * std::exp(logw);
    sum += term;
    if (prev_term > 0.0 && term < prev_term) {
      double r = term / prev_term;
      if (r < 0.5 && term * r / (1.0 - r) < 1e-14 * sum) break;
    }
    prev_term = term;
  }
  double logbin = std::lgamma(l + 1.0) - std::lgamma(c + 1.0) - std::lgamma(l - c + 1.0);
  return std::exp(logbin) * sum;
}

}  // namespace wf
