#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "predauct/distributions.hpp"
#include "predauct/ironing.hpp"

namespace predauct {

// Personalized-reserve rules for the eager second-price auction.
//  - SpaIgnore:    everyone gets the prior monopoly price (signals unused)
//  - SignalEager:  r_i = s_i
//  - KUncapped(k): the k highest-signal buyers get max(s_i, p*(s_i)), the
//                  rest get p*(s_i); k = 0 is the monopoly-price eager rule
//  - Hybrid:       the better of SpaIgnore and SignalEager at the given
//                  gamma, selected by estimated revenue (resolved inside the
//                  Monte-Carlo evaluator, not per realization)
struct ReservePolicy {
  enum class Type { SpaIgnore, SignalEager, KUncapped, Hybrid };
  Type type = Type::SignalEager;
  int k = 0;

  static ReservePolicy spa_ignore() { return {Type::SpaIgnore, 0}; }
  static ReservePolicy signal_eager() { return {Type::SignalEager, 0}; }
  static ReservePolicy k_uncapped(int k) { return {Type::KUncapped, k}; }
  static ReservePolicy monopoly_eager() { return {Type::KUncapped, 0}; }
  static ReservePolicy hybrid() { return {Type::Hybrid, 0}; }
  std::string name() const;
};

struct AuctionOutcome {
  std::optional<int> winner;           // nullopt: no sale
  double payment = 0.0;                // winner's payment (0 when no sale)
  std::vector<double> payments;        // per buyer, zero for losers
};

// Eager second-price auction: buyers below their reserves drop out first;
// the highest remaining bid wins (ties to the lowest index) and pays
// max(own reserve, highest remaining competing bid).
AuctionOutcome eager_run(std::span<const double> values,
                         std::span<const double> reserves);

// Reserve vector for a policy given the realized signals. Signal ranks break
// ties by buyer index. Hybrid has no per-profile reserves and throws.
std::vector<double> reserves_for(const ReservePolicy& policy,
                                 std::span<const double> signals, const Prior& prior,
                                 double gamma, int grid_size = 2000);

// Revenue-optimal signal-revealing auction at a realized profile: allocate
// to the highest non-negative ironed virtual value (ties to the lowest
// index); the winner pays the smallest value reaching the best competing
// level.
AuctionOutcome optimal_run(std::span<const double> values,
                           std::span<const PiecewiseVirtual> psis);

struct OptimalAuction {};
using AuctionSpec = std::variant<OptimalAuction, ReservePolicy>;
std::string auction_name(const AuctionSpec& spec);

struct McResult {
  double mean = 0.0;
  double std_err = 0.0;
};

// Expected revenue by simulation: signals are drawn from the prior (the
// marginal of the signal is the value distribution), values from the
// posterior given each signal. Deterministic for a fixed seed.
McResult mc_revenue(const Prior& prior, double gamma, int n_buyers,
                    const AuctionSpec& auction, long n_samples, std::uint64_t seed);

// Common-random-numbers sweep: every auction sees the same draws, which
// makes revenue differences far tighter than independent runs. Also reports
// mean/stderr of (auction k - auction 0) per sample. With keep_samples the
// per-sample revenue matrix is returned for custom paired statistics.
struct McSweep {
  std::vector<McResult> auctions;
  std::vector<McResult> diff_vs_first;
  std::vector<std::vector<double>> samples;  // [auction][sample], if kept
};
McSweep mc_revenue_sweep(const Prior& prior, double gamma, int n_buyers,
                         std::span<const AuctionSpec> specs, long n_samples,
                         std::uint64_t seed, int grid_size = 2000,
                         bool keep_samples = false);

// Expected revenue of a two-buyer eager auction conditional on the signal
// pair, computed exactly: the four hallucination/accurate cases weighted by
// (1-g)^2, (1-g)g, g(1-g), g^2, with one-dimensional quadrature for the
// continuous branches.
double exact_two_buyer_revenue(const Prior& prior, double gamma,
                               std::pair<double, double> signals,
                               const ReservePolicy& policy, int grid_size = 2000);

// Full-surplus extraction on the two-point prior (value 1 w.p. alpha, else
// 2) via a non-signal-revealing payment rule; audits IC/IR and the revenue
// identity revenue = E[v] - eps.
struct FullSurplusReport {
  double alpha = 0.0, gamma = 0.0, eps = 0.0;
  double q1 = 0.0, q2 = 0.0;  // P(s=1 | v=1), P(s=1 | v=2)
  double c1 = 0.0, c2 = 0.0;  // moment weights w(s=1), w(s=2)
  std::array<std::array<double, 2>, 2> payments{};  // [type-1][signal-1]
  std::array<std::array<double, 2>, 2> interim{};   // U(v; reported)
  bool ic_ok = false, ir_ok = false;
  double revenue = 0.0;
};
FullSurplusReport full_surplus_demo(double alpha, double gamma, double eps);

}  // namespace predauct
