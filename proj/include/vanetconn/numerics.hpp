#ifndef VANETCONN_NUMERICS_HPP
#define VANETCONN_NUMERICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace vanetconn {

/// Raised when an iterative or adaptive numerical method fails to reach its
/// tolerance, or a closed form would overflow.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Semi-infinite integrals are truncated at this many envelope decay lengths.
/// The tail beyond carries at most e^-50 of the envelope mass.
inline constexpr double kTailDecayLengths = 50.0;

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature on a finite interval. The worst
/// segment is bisected until the summed error estimate meets
/// max(abs_tol, rel_tol * |value|).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
    throw std::invalid_argument("integrate: tolerances must be > 0");
  if (!(b > a)) {
    if (a == b) return {};
    throw std::invalid_argument("integrate: require a <= b");
  }

  std::priority_queue<detail::Segment> work;
  work.push(detail::kronrod15(f, a, b));
  double value = work.top().value;
  double error = work.top().error;
  int subdivisions = 0;

  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    if (subdivisions >= spec.max_subdivisions)
      throw NumericalError("integrate: no convergence within " +
                           std::to_string(spec.max_subdivisions) + " subdivisions");
    const detail::Segment worst = work.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw NumericalError("integrate: segment cannot be bisected further");
    work.pop();
    const detail::Segment left = detail::kronrod15(f, worst.a, mid);
    const detail::Segment right = detail::kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++subdivisions;
  }

  // Re-sum from scratch so the running updates leave no drift.
  value = 0.0;
  error = 0.0;
  while (!work.empty()) {
    value += work.top().value;
    error += work.top().error;
    work.pop();
  }
  return {value, error, subdivisions};
}

/// Integral over [0, inf) of an integrand bounded by an e^(-decay_rate x)
/// envelope. Integrates over [0, 50 / decay_rate].
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double decay_rate, const QuadratureSpec& spec = {}) {
  if (!(decay_rate > 0.0) || !std::isfinite(decay_rate))
    throw std::invalid_argument("integrate_semi_infinite: decay rate must be positive and finite");
  return integrate(std::forward<F>(f), 0.0, kTailDecayLengths / decay_rate, spec);
}

/// Upper incomplete gamma function Gamma(s, x). Series for the lower function
/// when x < s + 1, Lentz continued fraction otherwise. Templated so callers
/// that fight cancellation can run it in extended precision.
template <class Real>
Real upper_incomplete_gamma(const Real& s, const Real& x) {
  using std::abs;
  using std::exp;
  using std::log;
  if (!(s > 0)) throw std::domain_error("upper_incomplete_gamma: s must be > 0");
  if (x < 0) throw std::domain_error("upper_incomplete_gamma: x must be >= 0");

  const Real complete = boost::math::tgamma(s);
  if (x == 0) return complete;

  const Real eps = std::numeric_limits<Real>::epsilon();
  const int max_iter = 100000;
  const Real log_prefactor = s * log(x) - x;

  if (x < s + 1) {
    Real term = 1 / s;
    Real sum = term;
    for (int n = 1; n <= max_iter; ++n) {
      term *= x / (s + n);
      sum += term;
      if (abs(term) < abs(sum) * eps) return complete - sum * exp(log_prefactor);
    }
    throw NumericalError("upper_incomplete_gamma: series did not converge");
  }

  const Real tiny = std::numeric_limits<Real>::min() / eps;
  Real b = x + 1 - s;
  Real c = 1 / tiny;
  Real d = 1 / b;
  Real h = d;
  for (int i = 1; i <= max_iter; ++i) {
    const Real an = -Real(i) * (Real(i) - s);
    b += 2;
    d = an * d + b;
    if (abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (abs(c) < tiny) c = tiny;
    d = 1 / d;
    const Real delta = d * c;
    h *= delta;
    if (abs(delta - 1) < eps) return exp(log_prefactor) * h;
  }
  throw NumericalError("upper_incomplete_gamma: continued fraction did not converge");
}

/// ln(n!). Exact integer product for n <= 20, log-gamma beyond.
inline double log_factorial(long long n) {
  if (n < 0) throw std::domain_error("log_factorial: n must be >= 0");
  if (n <= 20) {
    std::uint64_t f = 1;
    for (long long k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
    return std::log(static_cast<double>(f));
  }
  return boost::math::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace vanetconn

#endif  // VANETCONN_NUMERICS_HPP
