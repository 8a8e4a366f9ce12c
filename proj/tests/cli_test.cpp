#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "vanetconn/cli.hpp"

namespace vanetconn::cli {
namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

TEST(ParseValueList, Forms) {
  EXPECT_EQ(parse_value_list("0.019"), (std::vector<double>{0.019}));
  EXPECT_EQ(parse_value_list("5,15"), (std::vector<double>{5.0, 15.0}));
  const auto range = parse_value_list("0.002:0.03:0.004");
  ASSERT_EQ(range.size(), 8u);
  EXPECT_DOUBLE_EQ(range.front(), 0.002);
  EXPECT_NEAR(range.back(), 0.03, 1e-15);
  EXPECT_TRUE(parse_value_list("").empty());
  EXPECT_TRUE(parse_value_list("0.02:0.01:0.001").empty());
  EXPECT_THROW(parse_value_list("abc"), ConfigError);
  EXPECT_THROW(parse_value_list("1,,2"), ConfigError);
  EXPECT_THROW(parse_value_list("0:1:0"), ConfigError);
  EXPECT_THROW(parse_value_list("0:1"), ConfigError);
}

TEST(ParseEnums, KnownAndUnknown) {
  EXPECT_EQ(parse_models("both").size(), 2u);
  EXPECT_EQ(parse_models("rayleigh").front(), ChannelModel::rayleigh);
  EXPECT_EQ(parse_decider("components"), Decider::components);
  EXPECT_THROW(parse_models("nakagami"), ConfigError);
  EXPECT_THROW(parse_decider("power"), ConfigError);
}

TEST(RunConfig, EmptyGridIsUsageError) {
  RunConfig config;
  config.rho.clear();
  std::ostringstream out;
  EXPECT_THROW(write_analytic_csv(config, out), ConfigError);
  config.rho = {0.019};
  config.psi_db.clear();
  EXPECT_THROW(write_simulate_csv(config, out), ConfigError);
  config.psi_db = {15.0};
  config.noise_mw = -1.0;
  EXPECT_THROW(config.validate(), ConfigError);
}

TEST(AnalyticCsv, DefaultsContainNetworkConnectivity) {
  RunConfig config;
  std::ostringstream out;
  write_analytic_csv(config, out);
  const auto rows = lines(out.str());
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front(), "model,rho,psi_db,m_or_M,metric,value");
  bool found = false;
  for (const auto& row : rows) {
    const auto f = fields(row);
    if (f.size() == 6 && f[0] == "unit_disc" && f[2] == "15" && f[4] == "p_network") {
      EXPECT_NEAR(std::stod(f[5]), 0.2008, 1e-4);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(AnalyticCsv, ClosedFormColumnsAgreeWithQuadrature) {
  RunConfig config;
  config.models = {ChannelModel::rayleigh};
  std::ostringstream out;
  write_analytic_csv(config, out);
  std::map<std::string, double> quad, closed;
  for (const auto& row : lines(out.str())) {
    const auto f = fields(row);
    if (f.size() != 6) continue;
    const std::string key = f[2] + "/" + f[3];
    if (f[4] == "p_single_link") quad[key] = std::stod(f[5]);
    if (f[4] == "p_single_link_closed") closed[key] = std::stod(f[5]);
  }
  ASSERT_EQ(quad.size(), 20u);
  ASSERT_EQ(closed.size(), quad.size());
  for (const auto& [key, value] : quad) EXPECT_NEAR(closed[key], value, 1e-8 * value) << key;
}

TEST(AnalyticCsv, DivergentMeanIsFlagged) {
  RunConfig config;
  config.psi_db = {15.0};
  config.big_m = 3;
  std::ostringstream out;
  write_analytic_csv(config, out);
  const std::string text = out.str();
  EXPECT_NE(text.find("unit_disc,0.019,15,2,avg_snr,diverges"), std::string::npos);
  EXPECT_NE(text.find("rayleigh,0.019,15,1,avg_snr,diverges"), std::string::npos);
  EXPECT_EQ(text.find("rayleigh,0.019,15,3,avg_snr,diverges"), std::string::npos);
}

TEST(SimulateCsv, HeaderOrderAndDeterminism) {
  RunConfig config;
  config.rho = {0.01, 0.02};
  config.psi_db = {15.0};
  config.length_m = 2'000.0;
  config.trials = 20;
  config.seed = 5;
  config.big_m = 2;
  config.decider = Decider::both;

  std::ostringstream first, second, parallel;
  config.workers = 1;
  EXPECT_EQ(write_simulate_csv(config, first), 0u);
  EXPECT_EQ(write_simulate_csv(config, second), 0u);
  config.workers = 3;
  write_simulate_csv(config, parallel);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(first.str(), parallel.str());

  const auto rows = lines(first.str());
  EXPECT_EQ(rows.front(),
            "model,rho,psi_db,n_vehicles,trials,metric,estimate,ci_lo,ci_hi,seed,decider_disagreements");
  // 7 metrics per (point, model): network, 2 single-link, degree, 3 vehicle.
  ASSERT_EQ(rows.size(), 1u + 2u * 2u * 7u);
  EXPECT_EQ(fields(rows[1])[0], "unit_disc");
  EXPECT_EQ(fields(rows[1])[1], "0.01");
  EXPECT_EQ(fields(rows[8])[0], "rayleigh");
  EXPECT_EQ(fields(rows[15])[1], "0.02");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    ASSERT_EQ(f.size(), 11u);
    EXPECT_EQ(f[10], "0");  // no eigen / union-find disagreement
    EXPECT_LE(std::stod(f[7]), std::stod(f[6]));
    EXPECT_GE(std::stod(f[8]), std::stod(f[6]));
  }
}

TEST(Preset, Fig6Grid) {
  RunConfig config;
  apply_preset(config, "fig6");
  EXPECT_EQ(config.rho.size(), 8u);
  EXPECT_EQ(config.psi_db, (std::vector<double>{5.0, 15.0}));
  EXPECT_EQ(config.grid().size(), 16u);
  EXPECT_THROW(apply_preset(config, "fig99"), ConfigError);
}

}  // namespace
}  // namespace vanetconn::cli
