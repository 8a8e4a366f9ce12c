#ifndef VANETCONN_MONTECARLO_HPP
#define VANETCONN_MONTECARLO_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "vanetconn/channel.hpp"
#include "vanetconn/graph.hpp"
#include "vanetconn/random.hpp"
#include "vanetconn/scenario.hpp"

namespace vanetconn {

enum class ChannelModel { unit_disc, rayleigh };

inline std::string_view to_string(ChannelModel model) {
  return model == ChannelModel::unit_disc ? "unit_disc" : "rayleigh";
}

/// How a trial decides network connectivity.
enum class Decider {
  eigen,       // algebraic connectivity above tolerance
  components,  // union-find component count == 1
  both,        // eigen verdict, with union-find disagreement recorded
};

enum class IsolationSide { forward, backward, two_side };

struct TrialOptions {
  /// Largest m for which (i, i + m) link counts are gathered.
  int max_neighbor = 10;
  Decider decider = Decider::eigen;
  /// Single-link statistics only need the adjacency; skip the eigensolve.
  bool decide_connectivity = true;
};

struct Execution {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;

  unsigned resolved() const {
    if (workers > 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

/// Everything one snapshot contributes to the ensemble statistics.
struct TrialOutcome {
  bool connected = false;
  bool decider_disagreement = false;
  std::vector<int> degrees;
  /// link_to_mth[m - 1] = number of linked pairs (i, i + m).
  std::vector<int> link_to_mth;
  int isolated_two_side = 0;  // vehicles with degree 0
  int isolated_forward = 0;   // among vehicles 0..N-2: no linked j > i
  int isolated_backward = 0;  // among vehicles 1..N-1: no linked j < i
};

/// Per-pair SNR for one placement. Unit disc uses the path-loss SNR; Rayleigh
/// draws one exponential per unordered pair, row-major over the upper
/// triangle, and mirrors it. Co-located vehicles get infinite SNR.
inline SnrMatrix snr_matrix(const Placement& placement, const LinkBudget& budget, ChannelModel model,
                            RandomStream& rng) {
  const auto n = static_cast<Eigen::Index>(placement.size());
  SnrMatrix snr = SnrMatrix::Zero(n, n);
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = placement.distances(i, j);
      double value;
      if (model == ChannelModel::unit_disc) {
        value = d > 0.0 ? deterministic_snr(d, budget) : inf;
      } else {
        const double u = rng.uniform_open_closed();
        value = d > 0.0 ? -deterministic_snr(d, budget) * std::log(u) : inf;
      }
      snr(i, j) = value;
      snr(j, i) = value;
    }
  }
  return snr;
}

/// One snapshot: headways, distances, SNR, threshold, graph, statistics.
inline TrialOutcome run_trial(const ScenarioParams& params, ChannelModel model, RandomStream& rng,
                              const TrialOptions& options = {}) {
  const Placement placement = placement_from_headways(sample_headways(params, rng));
  const GraphMatrices g = adjacency_from_snr(snr_matrix(placement, params.budget, model, rng), params.psi);
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXi& a = g.adjacency();

  TrialOutcome out;
  out.degrees = g.degrees();
  out.link_to_mth.assign(static_cast<std::size_t>(std::max(0, options.max_neighbor)), 0);
  for (int m = 1; m <= options.max_neighbor; ++m)
    for (Eigen::Index i = 0; i + m < n; ++i) out.link_to_mth[static_cast<std::size_t>(m - 1)] += a(i, i + m);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.degrees[static_cast<std::size_t>(i)] == 0) ++out.isolated_two_side;
    if (i + 1 < n && a.row(i).tail(n - i - 1).sum() == 0) ++out.isolated_forward;
    if (i > 0 && a.row(i).head(i).sum() == 0) ++out.isolated_backward;
  }

  if (options.decide_connectivity) {
    if (options.decider == Decider::components) {
      out.connected = count_partitions_unionfind(g) == 1;
    } else {
      out.connected = is_connected(g);
      if (options.decider == Decider::both)
        out.decider_disagreement = out.connected != (count_partitions_unionfind(g) == 1);
    }
  }
  return out;
}

/// Runs trials 0..trials-1, trial t on RandomStream::for_trial(seed, t).
/// Results are indexed by trial, so they do not depend on the worker count.
inline std::vector<TrialOutcome> run_ensemble(const ScenarioParams& params, ChannelModel model,
                                              std::size_t trials, std::uint64_t master_seed,
                                              const TrialOptions& options = {}, const Execution& exec = {}) {
  if (trials < 1) throw std::invalid_argument("run_ensemble: need at least one trial");
  std::vector<TrialOutcome> outcomes(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        RandomStream rng = RandomStream::for_trial(master_seed, t);
        outcomes[t] = run_trial(params, model, rng, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };

  const unsigned workers = std::min<std::size_t>(exec.resolved(), trials);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for proportion p over n (possibly effective) trials.
inline Interval wilson_interval(double p, double n, double z = kZ95) {
  if (!(n > 0.0)) throw std::invalid_argument("wilson_interval: n must be > 0");
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(std::max(0.0, p * (1.0 - p) / n + z2 / (4.0 * n * n))) / denom;
  return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

/// A proportion with its 95% interval. For network connectivity there is one
/// observation per trial; pooled metrics (links, vehicles) have many.
struct EnsembleEstimate {
  std::size_t trials = 0;
  std::size_t observations = 0;
  std::size_t successes = 0;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

struct MeanEstimate {
  std::size_t trials = 0;
  std::size_t observations = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t seed = 0;
};

/// One Bernoulli observation per trial: Wilson interval on the trial count.
inline EnsembleEstimate bernoulli_estimate(std::size_t successes, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("bernoulli_estimate: need at least one trial");
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  const Interval ci = wilson_interval(p, static_cast<double>(trials));
  return {trials, trials, successes, p, ci.lo, ci.hi, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)),
          seed};
}

/// Pooled proportion over trials that each contribute the same number of
/// observations. Observations inside a trial are correlated, so the standard
/// error comes from the spread of per-trial proportions, and the Wilson
/// interval uses the matching effective sample size.
inline EnsembleEstimate pooled_estimate(std::span<const std::size_t> successes_per_trial,
                                        std::size_t observations_per_trial, std::uint64_t seed) {
  const std::size_t trials = successes_per_trial.size();
  if (trials < 1 || observations_per_trial < 1)
    throw std::invalid_argument("pooled_estimate: need observations");
  std::size_t successes = 0;
  for (std::size_t s : successes_per_trial) successes += s;
  const std::size_t observations = trials * observations_per_trial;
  const double p = static_cast<double>(successes) / static_cast<double>(observations);

  double se = std::sqrt(p * (1.0 - p) / static_cast<double>(observations));
  if (trials >= 2) {
    double ss = 0.0;
    for (std::size_t s : successes_per_trial) {
      const double q = static_cast<double>(s) / static_cast<double>(observations_per_trial) - p;
      ss += q * q;
    }
    se = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
  }
  double n_eff = static_cast<double>(observations);
  if (se > 0.0 && p > 0.0 && p < 1.0) n_eff = p * (1.0 - p) / (se * se);
  const Interval ci = wilson_interval(p, n_eff);
  return {trials, observations, successes, p, ci.lo, ci.hi, se, seed};
}

/// Sample mean over trials of a per-trial average.
inline MeanEstimate mean_estimate(std::span<const double> per_trial, std::size_t observations,
                                  std::uint64_t seed) {
  const std::size_t trials = per_trial.size();
  if (trials < 1) throw std::invalid_argument("mean_estimate: need at least one trial");
  double mean = 0.0;
  for (double v : per_trial) mean += v;
  mean /= static_cast<double>(trials);
  double se = 0.0;
  if (trials >= 2) {
    double ss = 0.0;
    for (double v : per_trial) ss += (v - mean) * (v - mean);
    se = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
  }
  return {trials, observations, mean, se, mean - kZ95 * se, mean + kZ95 * se, seed};
}

/// Vehicles closer than this many indices to either end of the platoon are
/// left out of the degree average: a vehicle that far in has, with
/// overwhelming probability, every neighbor it could link to on both sides,
/// so the interior average estimates the infinite-road degree. Never more
/// than (N - 1) / 2, which keeps at least the middle vehicle.
inline std::size_t degree_edge_margin(const ScenarioParams& params, ChannelModel model) {
  double reach = unit_disc_range(params.budget, params.psi);
  // Beyond reach * ln(1e12)^(1/alpha) a faded link needs a 1e-12 event.
  if (model == ChannelModel::rayleigh) reach *= std::pow(std::log(1e12), 1.0 / params.budget.ple);
  const double expected = params.rho * reach;
  const double margin = std::ceil(expected + 6.0 * std::sqrt(expected) + 6.0);
  const std::size_t cap = (params.n_vehicles - 1) / 2;
  if (!(margin < static_cast<double>(cap))) return cap;
  return static_cast<std::size_t>(margin);
}

/// Every metric of an ensemble, folded in trial order.
struct EnsembleSummary {
  std::size_t n_vehicles = 0;
  EnsembleEstimate network;
  std::vector<EnsembleEstimate> single_link;  // index m - 1
  MeanEstimate node_degree;
  EnsembleEstimate vehicle_forward;
  EnsembleEstimate vehicle_backward;
  EnsembleEstimate vehicle_two_side;
  std::size_t decider_disagreements = 0;
};

namespace detail {

inline EnsembleEstimate single_link_from(std::span<const TrialOutcome> outcomes, std::size_t n, int m,
                                         std::uint64_t seed) {
  std::vector<std::size_t> per_trial;
  per_trial.reserve(outcomes.size());
  for (const TrialOutcome& o : outcomes)
    per_trial.push_back(static_cast<std::size_t>(o.link_to_mth.at(static_cast<std::size_t>(m - 1))));
  return pooled_estimate(per_trial, n - static_cast<std::size_t>(m), seed);
}

inline EnsembleEstimate vehicle_from(std::span<const TrialOutcome> outcomes, std::size_t n, IsolationSide side,
                                     std::uint64_t seed) {
  const std::size_t eligible = side == IsolationSide::two_side ? n : n - 1;
  std::vector<std::size_t> per_trial;
  per_trial.reserve(outcomes.size());
  for (const TrialOutcome& o : outcomes) {
    const int isolated = side == IsolationSide::forward    ? o.isolated_forward
                         : side == IsolationSide::backward ? o.isolated_backward
                                                           : o.isolated_two_side;
    per_trial.push_back(eligible - static_cast<std::size_t>(isolated));
  }
  return pooled_estimate(per_trial, eligible, seed);
}

inline MeanEstimate degree_from(std::span<const TrialOutcome> outcomes, std::size_t n, std::size_t margin,
                                std::uint64_t seed) {
  const std::size_t first = margin;
  const std::size_t last = n - 1 - margin;  // inclusive
  const std::size_t count = last - first + 1;
  std::vector<double> per_trial;
  per_trial.reserve(outcomes.size());
  for (const TrialOutcome& o : outcomes) {
    long long sum = 0;
    for (std::size_t i = first; i <= last; ++i) sum += o.degrees[i];
    per_trial.push_back(static_cast<double>(sum) / static_cast<double>(count));
  }
  return mean_estimate(per_trial, count * outcomes.size(), seed);
}

}  // namespace detail

inline EnsembleSummary summarize(std::span<const TrialOutcome> outcomes, const ScenarioParams& params,
                                 ChannelModel model, std::uint64_t seed, const TrialOptions& options = {}) {
  const std::size_t n = params.n_vehicles;
  EnsembleSummary s;
  s.n_vehicles = n;

  std::size_t connected = 0;
  for (const TrialOutcome& o : outcomes) {
    connected += o.connected ? 1 : 0;
    s.decider_disagreements += o.decider_disagreement ? 1 : 0;
  }
  s.network = bernoulli_estimate(connected, outcomes.size(), seed);

  const int max_m = std::min<int>(options.max_neighbor, static_cast<int>(n) - 1);
  for (int m = 1; m <= max_m; ++m) s.single_link.push_back(detail::single_link_from(outcomes, n, m, seed));

  s.node_degree = detail::degree_from(outcomes, n, degree_edge_margin(params, model), seed);
  s.vehicle_forward = detail::vehicle_from(outcomes, n, IsolationSide::forward, seed);
  s.vehicle_backward = detail::vehicle_from(outcomes, n, IsolationSide::backward, seed);
  s.vehicle_two_side = detail::vehicle_from(outcomes, n, IsolationSide::two_side, seed);
  return s;
}

/// Network connectivity probability with a Wilson 95% interval.
inline EnsembleEstimate estimate_connectivity(const ScenarioParams& params, ChannelModel model,
                                              std::size_t trials, std::uint64_t master_seed,
                                              const Execution& exec = {}, Decider decider = Decider::eigen) {
  TrialOptions options;
  options.max_neighbor = 0;
  options.decider = decider;
  const auto outcomes = run_ensemble(params, model, trials, master_seed, options, exec);
  std::size_t connected = 0;
  for (const TrialOutcome& o : outcomes) connected += o.connected ? 1 : 0;
  return bernoulli_estimate(connected, trials, master_seed);
}

/// Fraction of (i, i + m) pairs that are directly linked.
inline EnsembleEstimate estimate_single_link(const ScenarioParams& params, ChannelModel model, int m,
                                             std::size_t trials, std::uint64_t master_seed,
                                             const Execution& exec = {}) {
  if (m < 1 || static_cast<std::size_t>(m) > params.n_vehicles - 1)
    throw std::invalid_argument("estimate_single_link: m must be in [1, N - 1]");
  TrialOptions options;
  options.max_neighbor = m;
  options.decide_connectivity = false;
  const auto outcomes = run_ensemble(params, model, trials, master_seed, options, exec);
  return detail::single_link_from(outcomes, params.n_vehicles, m, master_seed);
}

/// Mean degree of vehicles away from the platoon ends (see degree_edge_margin).
inline MeanEstimate estimate_node_degree(const ScenarioParams& params, ChannelModel model, std::size_t trials,
                                         std::uint64_t master_seed, const Execution& exec = {}) {
  TrialOptions options;
  options.max_neighbor = 0;
  options.decide_connectivity = false;
  const auto outcomes = run_ensemble(params, model, trials, master_seed, options, exec);
  return detail::degree_from(outcomes, params.n_vehicles, degree_edge_margin(params, model), master_seed);
}

/// Fraction of vehicles that are not isolated. One-side counts only vehicles
/// that have at least one neighbor in that direction.
inline EnsembleEstimate estimate_vehicle_connectivity(const ScenarioParams& params, ChannelModel model,
                                                      IsolationSide side, std::size_t trials,
                                                      std::uint64_t master_seed, const Execution& exec = {}) {
  TrialOptions options;
  options.max_neighbor = 0;
  options.decide_connectivity = false;
  const auto outcomes = run_ensemble(params, model, trials, master_seed, options, exec);
  return detail::vehicle_from(outcomes, params.n_vehicles, side, master_seed);
}

struct GridPoint {
  double rho = 0.0;
  double psi = 0.0;  // linear
};

struct SweepConfig {
  double road_length = 10'000.0;
  LinkBudget budget;
  std::vector<ChannelModel> models{ChannelModel::unit_disc, ChannelModel::rayleigh};
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  TrialOptions trial;
  Execution exec;
};

struct SweepRow {
  ChannelModel model = ChannelModel::unit_disc;
  GridPoint point;
  std::size_t n_vehicles = 0;
  std::optional<EnsembleSummary> summary;  // empty when the point failed
  std::string error;
};

/// One row per (grid point, model), grid-major. Every row reuses the master
/// seed, so a row equals a standalone estimate at that point. A failing
/// point records its error and the sweep moves on.
inline std::vector<SweepRow> sweep(std::span<const GridPoint> grid, const SweepConfig& config) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * config.models.size());
  for (const GridPoint& point : grid) {
    for (ChannelModel model : config.models) {
      SweepRow row;
      row.model = model;
      row.point = point;
      try {
        const ScenarioParams params = ScenarioParams::make(point.rho, config.road_length, config.budget, point.psi);
        row.n_vehicles = params.n_vehicles;
        const auto outcomes =
            run_ensemble(params, model, config.trials, config.master_seed, config.trial, config.exec);
        row.summary = summarize(outcomes, params, model, config.master_seed, config.trial);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace vanetconn

#endif  // VANETCONN_MONTECARLO_HPP
