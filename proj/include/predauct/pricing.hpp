#pragma once

#include <string>

#include "predauct/distributions.hpp"
#include "predauct/posterior.hpp"

namespace predauct {

enum class Regime { Ignore, Follow, Cap, FollowAgain, Unclassified };
const char* regime_name(Regime r);

// Regime boundaries of the single-buyer optimal posted price. M always
// equals p_cap; C and m are the supremum and infimum of the region where
// the scaled virtual value is negative (audit fields).
struct Thresholds {
  double p_ignore = 0.0;  // prior monopoly price, inf{phi_F >= 0}
  double p_cap = 0.0;
  double L = 0.0, M = 0.0, U = 0.0;
  double C = 0.0, m = 0.0;
  bool scaled_virtual_negative_at_lo = true;  // which case of the general result fired
};

// Prior monopoly price inf{v : phi_F(v) >= 0} (b when the set is empty).
double monopoly_price(const Prior& prior, int grid_size = 2000, double tol = 1e-8);

// Seller revenue of posting price p against the posterior:
// p * (1 - F_{gamma,s}(p-)). The left limit means the atom at the signal
// buys when p equals the signal.
double revenue_at(const HallucinationPosterior& post, double p);

// Grid argmax of revenue_at; the grid always contains the signal and its
// one-sided neighbours, ties resolve to the smaller price.
double brute_force_price(const HallucinationPosterior& post, int grid_size);

// Closed-form regime thresholds. Valid for regular priors whose scaled
// virtual value has at most two sign changes (log-concave densities
// guarantee this); more sign changes raise NotLogConcaveError.
Thresholds compute_thresholds(const Prior& prior, double gamma, int grid_size = 2000,
                              double tol = 1e-8);

struct PricedSignal {
  double price;
  Regime regime;
};

// Optimal posted price by the four-regime rule; agrees with
// brute_force_price within one grid step where the preconditions hold.
PricedSignal optimal_price(const Prior& prior, double gamma, double s,
                           int grid_size = 2000);

// Same rule from precomputed thresholds (for sweeps over signals).
PricedSignal optimal_price(const Thresholds& th, double s);

// Optimal prices under the Gaussian-noise and hybrid signal models, by grid
// argmax of p * P(v >= p | s).
double noise_price(const Prior& prior, double sigma, double s, int grid_size);
double hybrid_price(const Prior& prior, double gamma, double sigma, double s,
                    int grid_size);

}  // namespace predauct
