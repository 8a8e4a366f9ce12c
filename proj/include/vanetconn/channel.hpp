#ifndef VANETCONN_CHANNEL_HPP
#define VANETCONN_CHANNEL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vanetconn/random.hpp"

namespace vanetconn {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

/// Link budget of the distance power-law channel. All quantities linear.
struct LinkBudget {
  double tx_power_mw = 0.0;
  double noise_power_mw = 0.0;
  double beta = 0.0;  // reference path loss times total antenna gain
  int ple = 0;        // path-loss exponent

  static LinkBudget make(double tx_power_mw, double noise_power_mw, double beta, int ple) {
    if (!(tx_power_mw > 0.0) || !std::isfinite(tx_power_mw))
      throw std::invalid_argument("LinkBudget: tx power must be positive and finite");
    if (!(noise_power_mw > 0.0) || !std::isfinite(noise_power_mw))
      throw std::invalid_argument("LinkBudget: noise power must be positive and finite");
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("LinkBudget: beta must be positive and finite");
    if (ple < 1) throw std::invalid_argument("LinkBudget: path-loss exponent must be >= 1");
    return LinkBudget{tx_power_mw, noise_power_mw, beta, ple};
  }

  /// SNR at one meter, beta * P_T / P_noise.
  double snr_at_unit_distance() const { return beta * tx_power_mw / noise_power_mw; }
};

/// Received SNR under pure path loss.
inline double deterministic_snr(double distance_m, const LinkBudget& budget) {
  if (!(distance_m > 0.0))
    throw std::domain_error("deterministic_snr: distance must be > 0");
  return budget.snr_at_unit_distance() / std::pow(distance_m, budget.ple);
}

/// Distance at which the deterministic SNR equals the threshold.
inline double unit_disc_range(const LinkBudget& budget, double psi) {
  if (!(psi > 0.0)) throw std::invalid_argument("unit_disc_range: threshold must be > 0");
  return std::pow(budget.snr_at_unit_distance() / psi, 1.0 / budget.ple);
}

/// One Rayleigh-faded SNR draw: exponential with mean deterministic_snr(d).
inline double sample_rayleigh_snr(double distance_m, const LinkBudget& budget,
                                  RandomStream& rng) {
  const double mean = deterministic_snr(distance_m, budget);
  return -mean * std::log(rng.uniform_open_closed());
}

}  // namespace vanetconn

#endif  // VANETCONN_CHANNEL_HPP
