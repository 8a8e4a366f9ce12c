// vanetconn: analytic evaluation and Monte-Carlo sweeps of 1D VANET
// connectivity under unit-disc and Rayleigh-fading channels. Emits CSV.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vanetconn/cli.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RawFlags {
  std::string model = "both";
  std::string rho = "0.019";
  std::string psi_db = "5,15";
  std::string decider = "eigen";
  std::string preset;
  std::string out;
};

void add_common(CLI::App& cmd, vanetconn::cli::RunConfig& config, RawFlags& raw) {
  cmd.add_option("--model", raw.model, "unit_disc, rayleigh or both")->capture_default_str();
  cmd.add_option("--rho", raw.rho, "density in vehicles/m: value, comma list or start:stop:step")
      ->capture_default_str();
  cmd.add_option("--psi-db", raw.psi_db, "SNR threshold(s) in dB, same syntax as --rho")->capture_default_str();
  cmd.add_option("--tx-dbm", config.tx_dbm, "transmit power (dBm)")->capture_default_str();
  cmd.add_option("--noise-mw", config.noise_mw, "noise power (mW)")->capture_default_str();
  cmd.add_option("--beta", config.beta, "reference path loss times antenna gain")->capture_default_str();
  cmd.add_option("--alpha", config.alpha, "path-loss exponent")->capture_default_str();
  cmd.add_option("--length-m", config.length_m, "road length (m)")->capture_default_str();
  cmd.add_option("--big-m", config.big_m, "neighbors per side (M)")->capture_default_str();
  cmd.add_option("--out", raw.out, "output CSV path (default stdout)");
}

void resolve(vanetconn::cli::RunConfig& config, const RawFlags& raw) {
  using namespace vanetconn::cli;
  config.models = parse_models(raw.model);
  config.rho = parse_value_list(raw.rho);
  config.psi_db = parse_value_list(raw.psi_db);
  config.decider = parse_decider(raw.decider);
  if (!raw.preset.empty()) apply_preset(config, raw.preset);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace vanetconn::cli;

  CLI::App app{"Connectivity of 1D vehicular ad-hoc networks under unit-disc and Rayleigh-fading channels"};
  app.require_subcommand(1);

  RunConfig analytic_config;
  RawFlags analytic_raw;
  CLI::App* analytic = app.add_subcommand("analytic", "closed-form and quadrature metrics");
  add_common(*analytic, analytic_config, analytic_raw);

  RunConfig sim_config;
  RawFlags sim_raw;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo graph-ensemble estimates");
  add_common(*simulate, sim_config, sim_raw);
  simulate->add_option("--trials", sim_config.trials, "trials per grid point and model")->capture_default_str();
  simulate->add_option("--seed", sim_config.seed, "master seed")->capture_default_str();
  simulate->add_option("--decider", sim_raw.decider, "eigen, components or both")->capture_default_str();
  simulate->add_option("--workers", sim_config.workers, "worker threads (0 = all cores)")->capture_default_str();
  simulate->add_option("--preset", sim_raw.preset, "figure preset: fig6");

  CLI11_PARSE(app, argc, argv);

  const bool is_analytic = analytic->parsed();
  RunConfig& config = is_analytic ? analytic_config : sim_config;
  const RawFlags& raw = is_analytic ? analytic_raw : sim_raw;

  try {
    resolve(config, raw);
    config.validate();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::ofstream file;
  if (!raw.out.empty()) {
    file.open(raw.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open " << raw.out << '\n';
      return kExitConfig;
    }
  }
  std::ostream& out = raw.out.empty() ? std::cout : file;

  try {
    if (is_analytic) {
      write_analytic_csv(config, out);
      return 0;
    }
    const std::size_t failures = write_simulate_csv(config, out);
    if (failures > 0) {
      std::cerr << "error: " << failures << " grid point(s) failed, see error rows\n";
      return kExitNumerical;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
