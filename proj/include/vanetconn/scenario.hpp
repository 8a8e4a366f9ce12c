#ifndef VANETCONN_SCENARIO_HPP
#define VANETCONN_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vanetconn/channel.hpp"
#include "vanetconn/numerics.hpp"
#include "vanetconn/random.hpp"

namespace vanetconn {

/// Density, link budget and threshold without a road length. Analytic
/// formulas only need this much, and accept rho == 0 as a limit case.
struct OperatingPoint {
  double rho = 0.0;  // vehicles per meter
  LinkBudget budget;
  double psi = 0.0;  // linear SNR threshold
};

/// One sweep point of the free-flow highway.
struct ScenarioParams {
  double rho = 0.0;
  double road_length = 0.0;
  std::size_t n_vehicles = 0;
  LinkBudget budget;
  double psi = 0.0;

  static std::size_t vehicles_for(double rho, double road_length) {
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(rho * road_length)));
  }

  static ScenarioParams make(double rho, double road_length, const LinkBudget& budget, double psi) {
    if (!(rho > 0.0) || !std::isfinite(rho))
      throw std::invalid_argument("ScenarioParams: density must be positive and finite");
    if (!(road_length > 0.0) || !std::isfinite(road_length))
      throw std::invalid_argument("ScenarioParams: road length must be positive and finite");
    if (!(psi > 0.0) || !std::isfinite(psi))
      throw std::invalid_argument("ScenarioParams: SNR threshold must be positive and finite");
    const LinkBudget checked =
        LinkBudget::make(budget.tx_power_mw, budget.noise_power_mw, budget.beta, budget.ple);
    return ScenarioParams{rho, road_length, vehicles_for(rho, road_length), checked, psi};
  }

  OperatingPoint point() const { return {rho, budget, psi}; }
};

/// Vehicle placement of one snapshot. positions[0] == 0 and positions are
/// the prefix sums of the headways.
struct Placement {
  std::vector<double> headways;
  std::vector<double> positions;
  Eigen::MatrixXd distances;

  std::size_t size() const { return positions.size(); }
};

/// N - 1 i.i.d. exponential spacings with rate rho.
inline std::vector<double> sample_headways(const ScenarioParams& params, RandomStream& rng) {
  std::vector<double> headways(params.n_vehicles - 1);
  for (double& h : headways) h = rng.exponential(params.rho);
  return headways;
}

inline Placement placement_from_headways(std::span<const double> headways) {
  if (headways.empty())
    throw std::invalid_argument("placement_from_headways: need at least one headway (N >= 2)");
  for (double h : headways)
    if (!(h >= 0.0) || !std::isfinite(h))
      throw std::invalid_argument("placement_from_headways: headways must be finite and >= 0");

  const std::size_t n = headways.size() + 1;
  Placement p;
  p.headways.assign(headways.begin(), headways.end());
  p.positions.resize(n);
  p.positions[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) p.positions[i] = p.positions[i - 1] + headways[i - 1];

  // Row-wise running sums of the headways, mirrored into the lower triangle.
  p.distances = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      acc += headways[j - 1];
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      p.distances(r, c) = acc;
      p.distances(c, r) = acc;
    }
  }
  return p;
}

/// Density of the distance to the m-th neighbor (Erlang with shape m, rate rho).
inline double erlang_pdf(double x, int m, double rho) {
  if (m < 1) throw std::invalid_argument("erlang_pdf: neighbor index must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("erlang_pdf: density must be > 0");
  if (x < 0.0) return 0.0;
  if (x == 0.0) return m == 1 ? rho : 0.0;
  return std::exp(m * std::log(rho) + (m - 1) * std::log(x) - rho * x - log_factorial(m - 1));
}

}  // namespace vanetconn

#endif  // VANETCONN_SCENARIO_HPP
