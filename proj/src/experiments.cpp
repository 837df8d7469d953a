#include "predauct/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "predauct/auctions.hpp"
#include "predauct/errors.hpp"
#include "predauct/ironing.hpp"
#include "predauct/numeric.hpp"
#include "predauct/pricing.hpp"

namespace predauct {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Runs fn(i) for i in [0, n) across worker threads; results land in
// preallocated slots so output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.gamma_grid.resize(13);
  for (int i = 0; i < 13; ++i) c.gamma_grid[i] = 0.05 + 0.075 * i;
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: invalid JSON in '" + path + "': " + e.what());
  }
  ExperimentConfig c = defaults();
  if (j.contains("prior")) c.prior_token = j.at("prior").get<std::string>();
  if (j.contains("gammas")) c.gamma_grid = j.at("gammas").get<std::vector<double>>();
  if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
  if (j.contains("buyers")) c.n_buyers = j.at("buyers").get<int>();
  if (j.contains("samples")) c.n_samples = j.at("samples").get<long>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("grid")) c.grid_size = j.at("grid").get<int>();
  if (j.contains("out")) c.out_path = j.at("out").get<std::string>();
  return c;
}

void ExperimentConfig::validate() const {
  Prior::parse(prior_token);  // throws PriorParseError on malformed tokens
  if (gamma_grid.empty()) throw std::runtime_error("config: empty gamma grid");
  for (double g : gamma_grid)
    if (!(g > 0.0 && g < 1.0))
      throw std::runtime_error("config: gamma values must lie in (0,1)");
  if (n_samples < 1) throw std::runtime_error("config: samples must be >= 1");
  if (n_buyers < 1) throw std::runtime_error("config: buyers must be >= 1");
  if (grid_size < 100) throw std::runtime_error("config: grid must be >= 100");
  if (sigma && !(*sigma > 0.0)) throw std::runtime_error("config: sigma must be > 0");
}

std::string cmd_virtual_values(const ExperimentConfig& config, double gamma,
                               double signal) {
  const Prior prior = Prior::parse(config.prior_token);
  const HallucinationPosterior post(prior, gamma, signal);
  const PiecewiseVirtual psi = ironed_virtual(prior, gamma, signal, config.grid_size);
  const SampledVirtual oracle = monteiro_oracle(post, config.grid_size);

  std::vector<double> grid = linspace(prior.lo(), prior.hi(), config.grid_size + 1);
  grid.push_back(signal);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::ostringstream out;
  out << "# schema=1\n";
  out << "# cmd=virtual-values prior=" << config.prior_token << " gamma=" << num(gamma)
      << " signal=" << num(signal) << " grid=" << config.grid_size << "\n";
  out << "v,pre_iron,ironed,oracle\n";
  for (double v : grid) {
    out << num(v) << ",";
    if (v == signal) {
      out << "";  // the naive virtual value is undefined at the atom
    } else if (v < signal) {
      out << num(prior.scaled_virtual_value(gamma, v));
    } else {
      out << num(prior.virtual_value(v));
    }
    out << "," << num(psi(v)) << "," << num(oracle(v)) << "\n";
  }
  return out.str();
}

std::string cmd_price_curve(const ExperimentConfig& config, double gamma,
                            std::optional<double> sigma) {
  const Prior prior = Prior::parse(config.prior_token);
  if (sigma && !(*sigma > 0.0))
    throw std::runtime_error("price-curve: sigma must be > 0");

  std::optional<Thresholds> th;
  try {
    th = compute_thresholds(prior, gamma, config.grid_size);
  } catch (const NotLogConcaveError&) {
    th.reset();  // fall back to brute force below, tagged unclassified
  }

  const int n_signals = 200;
  std::vector<double> s_grid(n_signals);
  for (int i = 0; i < n_signals; ++i)
    s_grid[i] = prior.lo() + (prior.hi() - prior.lo()) * (i + 0.5) / n_signals;

  struct Row {
    double p_hall;
    std::optional<double> p_noise, p_hybrid;
    Regime regime;
  };
  std::vector<Row> rows(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) {
    const double s = s_grid[i];
    Row r{};
    if (th) {
      const PricedSignal ps = optimal_price(*th, s);
      r.p_hall = ps.price;
      r.regime = ps.regime;
    } else {
      r.p_hall = brute_force_price(HallucinationPosterior(prior, gamma, s),
                                   std::max(config.grid_size, 1000));
      r.regime = Regime::Unclassified;
    }
    if (sigma) {
      r.p_noise = noise_price(prior, *sigma, s, config.grid_size);
      r.p_hybrid = hybrid_price(prior, gamma, *sigma, s, config.grid_size);
    }
    rows[i] = r;
  });

  std::ostringstream out;
  out << "# schema=1\n";
  out << "# cmd=price-curve prior=" << config.prior_token << " gamma=" << num(gamma)
      << " sigma=" << (sigma ? num(*sigma) : "none") << " grid=" << config.grid_size
      << "\n";
  out << "s,p_hall,p_noise,p_hall_noise,regime\n";
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const Row& r = rows[i];
    out << num(s_grid[i]) << "," << num(r.p_hall) << ","
        << (r.p_noise ? num(*r.p_noise) : "") << ","
        << (r.p_hybrid ? num(*r.p_hybrid) : "") << "," << regime_name(r.regime) << "\n";
  }
  return out.str();
}

std::string cmd_revenue_ratio(const ExperimentConfig& config) {
  const Prior prior = Prior::parse(config.prior_token);
  const int n = config.n_buyers;
  if (n != 2)
    throw std::runtime_error("revenue-ratio: experiments are defined for 2 buyers");

  std::vector<AuctionSpec> specs;
  specs.emplace_back(OptimalAuction{});
  specs.emplace_back(ReservePolicy::signal_eager());
  for (int k = 0; k <= n; ++k) specs.emplace_back(ReservePolicy::k_uncapped(k));
  specs.emplace_back(ReservePolicy::hybrid());

  std::vector<std::string> rows(config.gamma_grid.size());
  parallel_for(config.gamma_grid.size(), [&](std::size_t gi) {
    const double gamma = config.gamma_grid[gi];
    const McSweep sweep =
        mc_revenue_sweep(prior, gamma, n, specs, config.n_samples,
                         Rng::derive_seed(config.seed, gi), config.grid_size);
    const double opt = sweep.auctions[0].mean;
    const double r_se = sweep.auctions[1].mean / opt;
    std::vector<double> r_k(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
      r_k[static_cast<std::size_t>(k)] = sweep.auctions[2 + static_cast<std::size_t>(k)].mean / opt;
    const double r_hybrid = sweep.auctions.back().mean / opt;
    const double r_best_k = *std::max_element(r_k.begin(), r_k.end());

    std::ostringstream row;
    row << num(gamma) << "," << num(r_se) << "," << num(r_k[0]);
    for (int k = 0; k <= n; ++k) row << "," << num(r_k[static_cast<std::size_t>(k)]);
    row << "," << num(r_best_k) << "," << num(r_hybrid) << "\n";
    rows[gi] = row.str();
  });

  std::ostringstream out;
  out << "# schema=1\n";
  out << "# cmd=revenue-ratio prior=" << config.prior_token
      << " buyers=" << config.n_buyers << " samples=" << config.n_samples
      << " seed=" << config.seed << " grid=" << config.grid_size
      << " signal_marginal=prior\n";
  out << "gamma,ratio_signal_eager,ratio_monopoly_eager";
  for (int k = 0; k <= n; ++k) out << ",ratio_k_uncapped_" << k;
  out << ",ratio_best_k_uncapped,ratio_hybrid\n";
  for (const std::string& r : rows) out << r;
  return out.str();
}

int count_price_regimes(const std::vector<double>& signals,
                        const std::vector<double>& prices, double step) {
  if (signals.size() != prices.size() || signals.empty())
    throw std::domain_error("count_price_regimes: size mismatch");
  int runs = 0;
  bool have_run = false, run_follow = false;
  double run_level = 0.0;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const bool follow = std::abs(prices[i] - signals[i]) <= 2.0 * step;
    bool new_run;
    if (!have_run) {
      new_run = true;
    } else if (follow != run_follow) {
      new_run = true;
    } else if (!follow) {
      new_run = std::abs(prices[i] - run_level) > 3.0 * step;
    } else {
      new_run = false;
    }
    if (new_run) {
      ++runs;
      have_run = true;
      run_follow = follow;
      run_level = prices[i];
    }
  }
  return runs;
}

CounterexampleOutputs cmd_counterexamples(const ExperimentConfig& config) {
  CounterexampleOutputs out;

  // 1. Non-regular mixture: the closed-form pre-signal ironing and the
  //    generalized-hull oracle disagree. The paper's prose and figure data
  //    give different parameters for the spike component; take whichever is
  //    non-regular on the grid (both are, so the figure variant wins).
  {
    const std::vector<std::string> candidates = {
        "mix:0.8*truncnormal:0.1,0.04,0.5,0.52+0.2*uniform:0,1",
        "mix:0.8*truncnormal:0.51,0.05,0.5,0.52+0.2*uniform:0,1"};
    std::string token;
    std::optional<Prior> prior;
    for (const auto& cand : candidates) {
      Prior p = Prior::parse(cand);
      if (!p.is_regular(std::max(config.grid_size, 2000))) {
        token = cand;
        prior = p;
        break;
      }
    }
    if (!prior)
      throw NumericalPreconditionError(
          "counterexamples: no candidate mixture is non-regular on the grid");

    const double gamma = 0.9, s = 0.53;
    const QuantileHull iron = truncated_iron(*prior, gamma, s, config.grid_size);
    const SampledVirtual oracle =
        monteiro_oracle(HallucinationPosterior(*prior, gamma, s), config.grid_size);

    const int n_rows = 1000;
    std::vector<double> vs(n_rows), iron_col(n_rows), oracle_col(n_rows);
    double max_gap = 0.0;
    for (int i = 0; i < n_rows; ++i) {
      const double v = prior->lo() + (s - prior->lo()) * i / n_rows;
      vs[i] = v;
      iron_col[i] = iron.slope_at(gamma * prior->cdf(v));
      oracle_col[i] = oracle(v);
      max_gap = std::max(max_gap, std::abs(iron_col[i] - oracle_col[i]));
    }
    std::ostringstream csv;
    csv << "# schema=1\n";
    csv << "# cmd=counterexamples part=ironing-gap prior=" << token
        << " gamma=" << num(gamma) << " signal=" << num(s)
        << " grid=" << config.grid_size << " max_gap=" << num(max_gap) << "\n";
    csv << "v,iron_trunc,oracle\n";
    for (int i = 0; i < n_rows; ++i)
      csv << num(vs[i]) << "," << num(iron_col[i]) << "," << num(oracle_col[i]) << "\n";
    out.ironing_gap_csv = csv.str();
  }

  // 2. Regular mixture with five price regimes. The paper does not state the
  //    hallucination rate behind its figure; gamma = 0.75 sits at the center
  //    of the window where five segments appear.
  {
    const std::string token = "mix:0.75*beta:4,6+0.25*beta:4,1";
    const Prior prior = Prior::parse(token);
    const double gamma = 0.75;
    const int price_grid = std::max(config.grid_size, 4000);
    const int n_signals = 400;
    std::vector<double> s_grid(n_signals), best(n_signals);
    for (int i = 0; i < n_signals; ++i)
      s_grid[i] = prior.lo() + (prior.hi() - prior.lo()) * (i + 0.5) / n_signals;
    parallel_for(s_grid.size(), [&](std::size_t i) {
      best[i] =
          brute_force_price(HallucinationPosterior(prior, gamma, s_grid[i]), price_grid);
    });
    const int regimes =
        count_price_regimes(s_grid, best, (prior.hi() - prior.lo()) / price_grid);

    std::ostringstream csv;
    csv << "# schema=1\n";
    csv << "# cmd=counterexamples part=price-regimes prior=" << token
        << " gamma=" << num(gamma) << " price_grid=" << price_grid
        << " regimes=" << regimes << "\n";
    csv << "s,best_price\n";
    for (int i = 0; i < n_signals; ++i)
      csv << num(s_grid[i]) << "," << num(best[i]) << "\n";
    out.price_regimes_csv = csv.str();
  }
  return out;
}

std::string cmd_full_surplus(double alpha, double gamma, double eps) {
  const FullSurplusReport rep = full_surplus_demo(alpha, gamma, eps);
  std::ostringstream out;
  out << "full-surplus mechanism on the two-point prior {1 w.p. " << num(alpha)
      << ", 2 w.p. " << num(1 - alpha) << "}, gamma=" << num(gamma)
      << ", eps=" << num(eps) << "\n";
  out << "signal likelihoods: q1=P(s=1|v=1)=" << num(rep.q1)
      << " q2=P(s=1|v=2)=" << num(rep.q2) << "\n";
  out << "moment weights: w(1)=" << num(rep.c1) << " w(2)=" << num(rep.c2) << "\n";
  out << "payment table (report, signal):\n";
  for (int v = 0; v < 2; ++v)
    for (int s = 0; s < 2; ++s)
      out << "  p(" << (v + 1) << "," << (s + 1) << ") = " << num(rep.payments[v][s])
          << "\n";
  out << "interim utilities:\n";
  for (int v = 0; v < 2; ++v)
    for (int hat = 0; hat < 2; ++hat)
      out << "  U(" << (v + 1) << ";" << (hat + 1) << ") = " << num(rep.interim[v][hat])
          << "\n";
  out << "IC " << (rep.ic_ok ? "ok" : "VIOLATED") << ", IR "
      << (rep.ir_ok ? "ok" : "VIOLATED") << "\n";
  out << "revenue = " << num(rep.revenue) << " (full surplus minus eps = "
      << num(2.0 - alpha - eps) << ")\n";
  return out.str();
}

}  // namespace predauct
