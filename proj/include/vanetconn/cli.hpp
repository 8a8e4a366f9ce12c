#ifndef VANETCONN_CLI_HPP
#define VANETCONN_CLI_HPP

// Run configuration and CSV writers behind the `vanetconn` command. Units in
// dB/dBm stop here; everything handed to the library is linear.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vanetconn/analytic.hpp"
#include "vanetconn/channel.hpp"
#include "vanetconn/montecarlo.hpp"
#include "vanetconn/scenario.hpp"

namespace vanetconn::cli {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::vector<ChannelModel> models{ChannelModel::unit_disc, ChannelModel::rayleigh};
  std::vector<double> rho{0.019};
  std::vector<double> psi_db{5.0, 15.0};
  double tx_dbm = 33.0;
  double noise_mw = 0.01;
  double beta = 10.0;
  int alpha = 2;
  double length_m = 10'000.0;
  int big_m = kDefaultSideTruncation;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  Decider decider = Decider::eigen;
  unsigned workers = 0;

  LinkBudget budget() const {
    try {
      return LinkBudget::make(dbm_to_mw(tx_dbm), noise_mw, beta, alpha);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  void validate() const {
    if (models.empty()) throw ConfigError("no channel model selected");
    if (rho.empty() || psi_db.empty()) throw ConfigError("empty grid: need at least one density and threshold");
    for (double r : rho)
      if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("densities must be positive and finite");
    for (double p : psi_db)
      if (!std::isfinite(p)) throw ConfigError("thresholds must be finite");
    if (!(length_m > 0.0) || !std::isfinite(length_m)) throw ConfigError("road length must be positive");
    if (big_m < 1) throw ConfigError("--big-m must be >= 1");
    if (trials < 1) throw ConfigError("--trials must be >= 1");
    budget();
  }

  /// Density-major, threshold-minor.
  std::vector<GridPoint> grid() const {
    std::vector<GridPoint> points;
    for (double r : rho)
      for (double p : psi_db) points.push_back({r, db_to_linear(p)});
    return points;
  }
};

inline std::vector<double> parse_value_list(std::string_view text) {
  auto to_double = [](std::string_view s) {
    const std::string str(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(str, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + str + "'");
    }
    if (used != str.size()) throw ConfigError("not a number: '" + str + "'");
    return v;
  };

  std::vector<double> values;
  if (text.empty()) return values;

  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t pos; (pos = text.find(':', start)) != std::string_view::npos; start = pos + 1)
      parts.push_back(text.substr(start, pos - start));
    parts.push_back(text.substr(start));
    if (parts.size() != 3) throw ConfigError("range must be start:stop:step");
    const double first = to_double(parts[0]);
    const double last = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0)) throw ConfigError("range step must be > 0");
    if (last < first) return values;
    const auto count = static_cast<long long>(std::floor((last - first) / step + 1e-9)) + 1;
    for (long long i = 0; i < count; ++i) values.push_back(first + static_cast<double>(i) * step);
    return values;
  }

  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(',', start);
    values.push_back(to_double(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return values;
}

inline std::vector<ChannelModel> parse_models(std::string_view text) {
  if (text == "unit_disc") return {ChannelModel::unit_disc};
  if (text == "rayleigh") return {ChannelModel::rayleigh};
  if (text == "both") return {ChannelModel::unit_disc, ChannelModel::rayleigh};
  throw ConfigError("unknown model '" + std::string(text) + "' (unit_disc, rayleigh, both)");
}

inline Decider parse_decider(std::string_view text) {
  if (text == "eigen") return Decider::eigen;
  if (text == "components") return Decider::components;
  if (text == "both") return Decider::both;
  throw ConfigError("unknown decider '" + std::string(text) + "' (eigen, components, both)");
}

/// Applies a named preset reproducing a figure's sweep.
inline void apply_preset(RunConfig& config, std::string_view name) {
  if (name == "fig6") {
    config.models = {ChannelModel::unit_disc, ChannelModel::rayleigh};
    config.rho = parse_value_list("0.002:0.03:0.004");
    config.psi_db = {5.0, 15.0};
    return;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace detail {

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace detail

/// Every analytic metric per grid point and model.
/// Columns: model,rho,psi_db,m_or_M,metric,value
inline void write_analytic_csv(const RunConfig& config, std::ostream& out) {
  config.validate();
  const LinkBudget budget = config.budget();
  out << "model,rho,psi_db,m_or_M,metric,value\n";

  for (double rho : config.rho) {
    for (double psi_db : config.psi_db) {
      const OperatingPoint op{rho, budget, db_to_linear(psi_db)};
      const ScenarioParams params = ScenarioParams::make(rho, config.length_m, budget, op.psi);
      for (ChannelModel model : config.models) {
        const std::string prefix =
            std::string(to_string(model)) + ',' + format_number(rho) + ',' + format_number(psi_db) + ',';
        auto row = [&](std::string_view index, std::string_view metric, const std::string& value) {
          out << prefix << index << ',' << metric << ',' << value << '\n';
        };
        auto avg_snr = [&](std::optional<double> v) { return v ? format_number(*v) : std::string("diverges"); };

        if (model == ChannelModel::unit_disc) {
          row("1", "p_single_link_first", format_number(p_single_link_ud_first(op)));
          row("", "p_network", format_number(p_network_ud(params)));
          for (int m = 1; m <= config.big_m; ++m)
            row(std::to_string(m), "p_single_link", format_number(p_single_link_ud(op, NeighborIndex(m))));
          for (int m = 1; m <= config.big_m; ++m)
            row(std::to_string(m), "avg_snr", avg_snr(avg_snr_ud(op, NeighborIndex(m))));
          row("", "p_vehicle", format_number(p_vehicle_ud(op)));
        } else {
          for (int m = 1; m <= config.big_m; ++m)
            row(std::to_string(m), "p_single_link", format_number(p_single_link_rayleigh(op, NeighborIndex(m))));
          if (budget.ple == 2) {
            for (int m = 1; m <= config.big_m; ++m) {
              std::string value;
              try {
                value = format_number(p_single_link_rayleigh_closed_alpha2(op, NeighborIndex(m)));
              } catch (const NumericalError&) {
                value = "unavailable";
              }
              row(std::to_string(m), "p_single_link_closed", value);
            }
          }
          for (int m = 1; m <= config.big_m; ++m)
            row(std::to_string(m), "avg_snr", avg_snr(avg_snr_rayleigh(op, NeighborIndex(m))));
          row("", "node_degree", format_number(avg_node_degree(op)));
          const SideTruncation big_m(config.big_m);
          row(std::to_string(config.big_m), "p_vehicle_one_side", format_number(p_vehicle_one_side_rayleigh(op, big_m)));
          row(std::to_string(config.big_m), "p_vehicle_two_side", format_number(p_vehicle_rayleigh(op, big_m)));
        }
      }
    }
  }
}

/// Monte-Carlo estimates per grid point and model. Returns the number of
/// rows that failed; failed points carry an `error` metric row.
/// Columns: model,rho,psi_db,n_vehicles,trials,metric,estimate,ci_lo,ci_hi,seed
/// plus decider_disagreements when the decider is `both`.
inline std::size_t write_simulate_csv(const RunConfig& config, std::ostream& out) {
  config.validate();
  SweepConfig sweep_config;
  sweep_config.road_length = config.length_m;
  sweep_config.budget = config.budget();
  sweep_config.models = config.models;
  sweep_config.trials = config.trials;
  sweep_config.master_seed = config.seed;
  sweep_config.trial.max_neighbor = config.big_m;
  sweep_config.trial.decider = config.decider;
  sweep_config.exec.workers = config.workers;

  const std::vector<GridPoint> grid = config.grid();
  const std::vector<SweepRow> rows = sweep(grid, sweep_config);
  const bool with_disagreements = config.decider == Decider::both;

  out << "model,rho,psi_db,n_vehicles,trials,metric,estimate,ci_lo,ci_hi,seed";
  if (with_disagreements) out << ",decider_disagreements";
  out << '\n';

  std::size_t failures = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const SweepRow& row = rows[r];
    const double psi_db = config.psi_db[(r / config.models.size()) % config.psi_db.size()];
    const std::string prefix = std::string(to_string(row.model)) + ',' + format_number(row.point.rho) + ',' +
                               format_number(psi_db) + ',' + std::to_string(row.n_vehicles) + ',' +
                               std::to_string(config.trials) + ',';
    const std::string suffix = ',' + std::to_string(config.seed) +
                               (with_disagreements && row.summary
                                    ? ',' + std::to_string(row.summary->decider_disagreements)
                                    : std::string(with_disagreements ? "," : "")) +
                               '\n';

    if (!row.summary) {
      ++failures;
      out << prefix << "error," << detail::quote(row.error) << ",," << suffix;
      continue;
    }
    auto proportion = [&](std::string_view metric, const EnsembleEstimate& e) {
      out << prefix << metric << ',' << format_number(e.estimate) << ',' << format_number(e.ci_lo) << ','
          << format_number(e.ci_hi) << suffix;
    };
    const EnsembleSummary& s = *row.summary;
    proportion("p_network", s.network);
    for (std::size_t m = 0; m < s.single_link.size(); ++m)
      proportion("p_single_link_m" + std::to_string(m + 1), s.single_link[m]);
    out << prefix << "node_degree," << format_number(s.node_degree.mean) << ','
        << format_number(s.node_degree.ci_lo) << ',' << format_number(s.node_degree.ci_hi) << suffix;
    proportion("p_vehicle_one_side", s.vehicle_forward);
    proportion("p_vehicle_one_side_backward", s.vehicle_backward);
    proportion("p_vehicle_two_side", s.vehicle_two_side);
  }
  return failures;
}

}  // namespace vanetconn::cli

#endif  // VANETCONN_CLI_HPP
