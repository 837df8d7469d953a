// Command-line front end for the prediction-aware auction toolkit. All
// experiment output is CSV on stdout or --out; runs are deterministic for a
// fixed seed. Exit codes: 0 success, 2 configuration error, 3 numerical
// precondition failure.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "predauct/errors.hpp"
#include "predauct/experiments.hpp"

namespace {

using predauct::ExperimentConfig;

struct CommonFlags {
  std::string config_path;
  std::string prior;
  std::vector<double> gammas;
  std::optional<double> sigma;
  std::optional<double> signal;
  std::optional<int> buyers;
  std::optional<long> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "flat JSON config; flags override");
  cmd->add_option("--prior", f.prior, "prior token, e.g. beta:1,2");
  cmd->add_option("--gamma", f.gammas, "hallucination probability (repeatable)")
      ->delimiter(',');
  cmd->add_option("--sigma", f.sigma, "noise standard deviation");
  cmd->add_option("--signal", f.signal, "observed signal value");
  cmd->add_option("--buyers", f.buyers, "number of buyers");
  cmd->add_option("--samples", f.samples, "Monte-Carlo sample count");
  cmd->add_option("--seed", f.seed, "root RNG seed");
  cmd->add_option("--grid", f.grid, "grid size for quadrature/argmax");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
}

ExperimentConfig merge(const CommonFlags& f) {
  ExperimentConfig c = f.config_path.empty()
                           ? ExperimentConfig::defaults()
                           : ExperimentConfig::from_json_file(f.config_path);
  if (!f.prior.empty()) c.prior_token = f.prior;
  if (!f.gammas.empty()) c.gamma_grid = f.gammas;
  if (f.sigma) c.sigma = f.sigma;
  if (f.buyers) c.n_buyers = *f.buyers;
  if (f.samples) c.n_samples = *f.samples;
  if (f.seed) c.seed = *f.seed;
  if (f.grid) c.grid_size = *f.grid;
  if (!f.out.empty()) c.out_path = f.out;
  c.validate();
  return c;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
}

double single_gamma(const ExperimentConfig& c) {
  if (c.gamma_grid.size() != 1)
    throw std::runtime_error("this command needs exactly one --gamma value");
  return c.gamma_grid[0];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal and near-optimal selling mechanisms from hallucination-prone "
               "value predictions"};
  app.require_subcommand(1);

  CommonFlags vv_flags, pc_flags, rr_flags, cx_flags;
  auto* vv = app.add_subcommand("virtual-values",
                                "ironed virtual value, its naive counterpart, and the "
                                "generalized-hull oracle on a value grid");
  add_common(vv, vv_flags);
  auto* pc = app.add_subcommand(
      "price-curve", "optimal posted price vs signal for the hallucination, noise, "
                     "and hybrid models");
  add_common(pc, pc_flags);
  auto* rr = app.add_subcommand(
      "revenue-ratio", "Monte-Carlo revenue of simple auctions relative to the "
                       "optimal signal-revealing auction, per gamma");
  add_common(rr, rr_flags);
  auto* cx = app.add_subcommand(
      "counterexamples", "non-regular ironing gap and the five-regime price curve; "
                         "--out is used as a filename prefix");
  add_common(cx, cx_flags);

  double fs_alpha = 0.5, fs_gamma = 0.5, fs_eps = 0.1;
  std::string fs_out;
  auto* fs = app.add_subcommand(
      "full-surplus", "payment table and audit of the two-type full-surplus "
                      "mechanism");
  fs->add_option("--alpha", fs_alpha, "probability of the low type");
  fs->add_option("--gamma", fs_gamma, "hallucination probability");
  fs->add_option("--eps", fs_eps, "surplus left to the buyer");
  fs->add_option("--out", fs_out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (vv->parsed()) {
      const ExperimentConfig c = merge(vv_flags);
      if (!vv_flags.signal) throw std::runtime_error("virtual-values needs --signal");
      write_output(c.out_path,
                   predauct::cmd_virtual_values(c, single_gamma(c), *vv_flags.signal));
    } else if (pc->parsed()) {
      const ExperimentConfig c = merge(pc_flags);
      write_output(c.out_path, predauct::cmd_price_curve(c, single_gamma(c), c.sigma));
    } else if (rr->parsed()) {
      const ExperimentConfig c = merge(rr_flags);
      write_output(c.out_path, predauct::cmd_revenue_ratio(c));
    } else if (cx->parsed()) {
      const ExperimentConfig c = merge(cx_flags);
      const auto outputs = predauct::cmd_counterexamples(c);
      if (c.out_path.empty()) {
        std::cout << outputs.ironing_gap_csv << outputs.price_regimes_csv;
      } else {
        write_output(c.out_path + "_ironing_gap.csv", outputs.ironing_gap_csv);
        write_output(c.out_path + "_price_regimes.csv", outputs.price_regimes_csv);
      }
    } else if (fs->parsed()) {
      write_output(fs_out, predauct::cmd_full_surplus(fs_alpha, fs_gamma, fs_eps));
    }
  } catch (const predauct::PriorParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const predauct::NumericalPreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
