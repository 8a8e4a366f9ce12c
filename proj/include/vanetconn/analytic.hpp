#ifndef VANETCONN_ANALYTIC_HPP
#define VANETCONN_ANALYTIC_HPP

// Closed-form and semi-analytic connectivity probabilities of a 1D free-flow
// highway under the unit-disc and Rayleigh-fading channels.
//
// Every function takes an OperatingPoint (density, link budget, threshold).
// Only network connectivity needs the vehicle count and takes ScenarioParams.

#include <cmath>
#include <optional>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "vanetconn/channel.hpp"
#include "vanetconn/numerics.hpp"
#include "vanetconn/scenario.hpp"

namespace vanetconn {

/// Which neighbor on one side, counted from 1 (the successor).
class NeighborIndex {
 public:
  explicit NeighborIndex(int m) : m_(m) {
    if (m < 1) throw std::invalid_argument("NeighborIndex: m must be >= 1");
  }
  int value() const { return m_; }

 private:
  int m_;
};

/// Number of one-side neighbors kept in the vehicle-connectivity product.
class SideTruncation {
 public:
  explicit SideTruncation(int big_m) : big_m_(big_m) {
    if (big_m < 1) throw std::invalid_argument("SideTruncation: M must be >= 1");
  }
  int value() const { return big_m_; }

 private:
  int big_m_;
};

inline constexpr int kDefaultSideTruncation = 10;

namespace detail {

inline void check_point(const OperatingPoint& op) {
  if (!(op.rho >= 0.0) || !std::isfinite(op.rho))
    throw std::invalid_argument("operating point: density must be finite and >= 0");
  if (!(op.psi > 0.0)) throw std::invalid_argument("operating point: threshold must be > 0");
}

}  // namespace detail

/// Distance scale of the fading exponent, e^{-(x / scale)^alpha}. Numerically
/// the same as the unit-disc range.
inline double fading_scale(const OperatingPoint& op) { return unit_disc_range(op.budget, op.psi); }

/// Successor link probability under the unit disc, 1 - e^{-rho r}.
inline double p_single_link_ud_first(const OperatingPoint& op) {
  detail::check_point(op);
  return -std::expm1(-op.rho * unit_disc_range(op.budget, op.psi));
}

/// Unit-disc network connectivity: all N - 1 successor links present.
inline double p_network_ud(const ScenarioParams& params) {
  const OperatingPoint op = params.point();
  detail::check_point(op);
  const double miss = std::exp(-op.rho * unit_disc_range(op.budget, op.psi));
  return std::exp(static_cast<double>(params.n_vehicles - 1) * std::log1p(-miss));
}

/// Unit-disc link probability to the m-th neighbor: the Erlang CDF at r, i.e.
/// P(Poisson(rho r) >= m). Summed from whichever tail avoids cancellation.
inline double p_single_link_ud(const OperatingPoint& op, NeighborIndex m) {
  detail::check_point(op);
  const double mu = op.rho * unit_disc_range(op.budget, op.psi);
  if (mu == 0.0) return 0.0;
  if (!std::isfinite(mu)) return 1.0;
  const double log_mu = std::log(mu);
  auto poisson_term = [&](int k) { return std::exp(-mu + k * log_mu - log_factorial(k)); };

  if (m.value() > mu) {
    double sum = 0.0;
    for (int k = m.value();; ++k) {
      const double t = poisson_term(k);
      sum += t;
      if (t <= sum * 1e-17) break;
    }
    return std::min(1.0, sum);
  }
  double lower = 0.0;
  for (int k = 0; k < m.value(); ++k) lower += poisson_term(k);
  return std::max(0.0, 1.0 - lower);
}

/// Rayleigh link probability to the m-th neighbor: the Erlang density times
/// the conditional exceedance e^{-(x/scale)^alpha}, integrated numerically.
inline double p_single_link_rayleigh(const OperatingPoint& op, NeighborIndex m,
                                     const QuadratureSpec& spec = {}) {
  detail::check_point(op);
  if (op.rho == 0.0) return 0.0;
  const double scale = fading_scale(op);
  const int alpha = op.budget.ple;
  const int k = m.value();
  const double log_prefactor = k * std::log(op.rho) - log_factorial(k - 1);

  auto integrand = [&](double x) {
    const double fade = std::pow(x / scale, alpha);
    if (x == 0.0) return k == 1 ? op.rho : 0.0;
    return std::exp(log_prefactor + (k - 1) * std::log(x) - op.rho * x - fade);
  };
  // Stretch the cutoff for far neighbors so the Erlang bulk (mean m / rho)
  // stays well inside it.
  const double decay = op.rho * kTailDecayLengths / (kTailDecayLengths + 2.0 * (k - 1));
  const double p = integrate_semi_infinite(integrand, decay, spec).value;
  return std::clamp(p, 0.0, 1.0);
}

/// Closed form of the Rayleigh link probability for alpha == 2, written with
/// upper incomplete gammas of half-integer order. Substituting
/// t = x / scale + a with a = rho * scale / 2 gives
///
///   P = (rho scale)^m e^{a^2} / (2 (m-1)!)
///       * sum_k C(m-1, k) (-a)^{m-1-k} Gamma((k+1)/2, a^2).
///
/// The alternating sum cancels badly once a grows, so it is evaluated in
/// 100-digit arithmetic; if more than 80 digits cancel the result is
/// refused and the quadrature route should be used instead.
inline double p_single_link_rayleigh_closed_alpha2(const OperatingPoint& op, NeighborIndex m) {
  using Wide = boost::multiprecision::cpp_bin_float_100;
  detail::check_point(op);
  if (op.budget.ple != 2)
    throw std::invalid_argument("closed-form Rayleigh link probability requires alpha == 2");
  if (op.rho == 0.0) return 0.0;

  const double scale = fading_scale(op);
  const double a = 0.5 * op.rho * scale;
  if (!(a * a < 700.0))
    throw NumericalError("closed-form Rayleigh link probability: e^{rho^2 scale^2 / 4} "
                         "overflows, use the quadrature route");

  const int n = m.value() - 1;
  const Wide wa = a;
  const Wide z = wa * wa;
  Wide sum = 0;
  Wide largest = 0;
  Wide binom = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    const Wide sign = ((n - k) % 2 == 0) ? Wide(1) : Wide(-1);
    const Wide term =
        binom * sign * pow(wa, n - k) * upper_incomplete_gamma(Wide(k + 1) / 2, z);
    sum += term;
    largest = std::max(largest, Wide(abs(term)));
  }
  if (!(sum > 0) || log10(largest / sum) > std::numeric_limits<Wide>::digits10 - 20)
    throw NumericalError("closed-form Rayleigh link probability: cancellation exhausted "
                         "working precision, use the quadrature route");

  const Wide value = pow(2 * wa, m.value()) * exp(z) * sum / (2 * boost::math::factorial<Wide>(n));
  return std::clamp(value.convert_to<double>(), 0.0, 1.0);
}

/// Mean received SNR at the m-th neighbor under Rayleigh fading, from the
/// product form beta P_T rho^alpha / P_noise * prod_{j=1..alpha} 1/(m-j).
/// Empty when m <= alpha: E[Z_m^-alpha] is infinite there, so the mean diverges.
inline std::optional<double> avg_snr_rayleigh(const OperatingPoint& op, NeighborIndex m) {
  detail::check_point(op);
  const int alpha = op.budget.ple;
  if (m.value() < alpha + 1) return std::nullopt;
  double value = op.budget.snr_at_unit_distance() * std::pow(op.rho, alpha);
  for (int j = 1; j <= alpha; ++j) value /= static_cast<double>(m.value() - j);
  return value;
}

/// Mean received SNR at the m-th neighbor under the unit disc. With a point
/// mass at the path-loss SNR, the marginal integral reduces to
/// beta P_T / P_noise * rho^alpha * Gamma(m - alpha) / Gamma(m).
inline std::optional<double> avg_snr_ud(const OperatingPoint& op, NeighborIndex m) {
  detail::check_point(op);
  const int alpha = op.budget.ple;
  if (m.value() < alpha + 1) return std::nullopt;
  const double gamma_ratio =
      std::exp(log_factorial(m.value() - alpha - 1) - log_factorial(m.value() - 1));
  return op.budget.snr_at_unit_distance() * std::pow(op.rho, alpha) * gamma_ratio;
}

/// Expected number of linked neighbors on an infinite road under Rayleigh
/// fading: rho times the integral of e^{-|x / scale|^alpha} over the line.
inline double avg_node_degree(const OperatingPoint& op, const QuadratureSpec& spec = {}) {
  detail::check_point(op);
  if (op.rho == 0.0) return 0.0;
  const double scale = fading_scale(op);
  const int alpha = op.budget.ple;
  auto integrand = [&](double x) { return std::exp(-std::pow(x / scale, alpha)); };
  return 2.0 * op.rho * integrate_semi_infinite(integrand, 1.0 / scale, spec).value;
}

namespace detail {

// prod_{m=1..M} (1 - P_SL(m)), treating the links as independent.
inline double one_side_isolation(const OperatingPoint& op, SideTruncation big_m,
                                 const QuadratureSpec& spec) {
  double isolated = 1.0;
  for (int m = 1; m <= big_m.value(); ++m)
    isolated *= 1.0 - p_single_link_rayleigh(op, NeighborIndex(m), spec);
  return isolated;
}

}  // namespace detail

/// Probability of at least one linked neighbor among the first M on one side,
/// assuming independent links.
inline double p_vehicle_one_side_rayleigh(const OperatingPoint& op,
                                          SideTruncation big_m = SideTruncation(kDefaultSideTruncation),
                                          const QuadratureSpec& spec = {}) {
  return 1.0 - detail::one_side_isolation(op, big_m, spec);
}

/// Two-side vehicle connectivity; the two sides isolate independently.
inline double p_vehicle_rayleigh(const OperatingPoint& op,
                                 SideTruncation big_m = SideTruncation(kDefaultSideTruncation),
                                 const QuadratureSpec& spec = {}) {
  const double one_side = detail::one_side_isolation(op, big_m, spec);
  return 1.0 - one_side * one_side;
}

/// Unit-disc vehicle connectivity collapses to the successor link.
inline double p_vehicle_ud(const OperatingPoint& op) { return p_single_link_ud_first(op); }

}  // namespace vanetconn

#endif  // VANETCONN_ANALYTIC_HPP
