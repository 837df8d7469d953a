#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "predauct/distributions.hpp"

namespace predauct {

// Knobs shared by the experiment commands. Flat JSON files mirror these
// fields; command-line flags override file values.
struct ExperimentConfig {
  std::string prior_token = "uniform:0,1";
  std::vector<double> gamma_grid;  // defaults to 13 points in [0.05, 0.95]
  std::optional<double> sigma;
  int n_buyers = 2;
  long n_samples = 100000;
  std::uint64_t seed = 20240601;
  int grid_size = 2000;
  std::string out_path;  // empty: stdout

  static ExperimentConfig defaults();
  static ExperimentConfig from_json_file(const std::string& path);
  void validate() const;  // throws on malformed fields (maps to exit code 2)
};

// Each command returns the finished CSV (or report) text; headers carry the
// schema tag and the exact inputs, so reruns with one seed are byte-stable.

// columns: v, pre_iron, ironed, oracle (pre_iron empty at v = signal)
std::string cmd_virtual_values(const ExperimentConfig& config, double gamma,
                               double signal);

// columns: s, p_hall, p_noise, p_hall_noise, regime (noise columns empty
// without a sigma)
std::string cmd_price_curve(const ExperimentConfig& config, double gamma,
                            std::optional<double> sigma);

// columns: gamma, ratio_signal_eager, ratio_monopoly_eager,
// ratio_k_uncapped_{0..n}, ratio_best_k_uncapped, ratio_hybrid
std::string cmd_revenue_ratio(const ExperimentConfig& config);

struct CounterexampleOutputs {
  std::string ironing_gap_csv;    // non-regular mixture: v, iron_trunc, oracle
  std::string price_regimes_csv;  // regular mixture: s, best_price
};
CounterexampleOutputs cmd_counterexamples(const ExperimentConfig& config);

// plain-text payment table and IC/IR/revenue audit
std::string cmd_full_surplus(double alpha, double gamma, double eps);

// Counts maximal segments of a best-price curve that are either constant or
// follow the identity, with `step` the price-grid resolution.
int count_price_regimes(const std::vector<double>& signals,
                        const std::vector<double>& prices, double step);

}  // namespace predauct
