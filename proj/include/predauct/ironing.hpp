#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "predauct/distributions.hpp"
#include "predauct/posterior.hpp"

namespace predauct {

// Quantile-space data behind the truncated ironing operator: the cumulative
// virtual-value integral J on [0, gamma*F(t)] together with its lower convex
// hull. Ironed values are hull-edge slopes.
struct QuantileHull {
  std::vector<double> quantiles;   // uniform grid on [0, gamma*F(t)]
  std::vector<double> cumulative;  // J at each grid quantile
  std::vector<double> values;      // v_k = F^{-1}(q_k / gamma)
  std::vector<std::size_t> hull;   // indices of lower-hull vertices
  std::vector<double> slopes;      // per-edge slopes, non-decreasing

  // Slope of the hull edge containing quantile q (left edge at vertices).
  double slope_at(double q) const;
};

// Myerson ironing of the gamma-scaled prior restricted to [lo, t] in
// quantile space. gamma = 1 with t = hi recovers classical ironing.
QuantileHull truncated_iron(const Prior& prior, double gamma, double t, int grid_size);

// Auxiliary mapping whose smallest root past the signal delimits the
// post-signal flat of the ironed virtual value. Non-increasing in x for
// regular priors; mu(s) > 0 and mu(hi) <= 0.
double mu(const Prior& prior, double gamma, double s, double x);

struct ThresholdDiagnostics {
  double residual = 0.0;
  int iterations = 0;
  bool degenerate = false;
};

// Smallest root of mu on (s, hi], by bisection. Returns s (with the
// degenerate flag) if mu(s) <= 0 at numerical precision, and hi when mu
// stays non-negative through the top.
double compute_T(const Prior& prior, double gamma, double s, double tol = 1e-10,
                 ThresholdDiagnostics* diag = nullptr);

// Ironed virtual value of the hallucination posterior, as ordered tagged
// pieces: ironing of the gamma-scaled prior below the signal, a constant
// stretch [signal, T), and the prior virtual value from T up.
class PiecewiseVirtual {
 public:
  enum class Kind { FollowScaledVirtual, Constant, FollowPriorVirtual };
  struct Piece {
    double lo, hi;
    Kind kind;
    double value;  // used by Constant pieces
  };

  double operator()(double v) const;

  // inf{v : psi(v) >= z}. Constant pieces resolve to their left endpoint;
  // Follow pieces bisect. Throws std::domain_error when z exceeds psi(hi).
  double pseudo_inverse(double z) const;

  const std::vector<Piece>& pieces() const { return pieces_; }
  const Prior& prior() const { return prior_; }
  double gamma() const { return gamma_; }
  double signal() const { return signal_; }
  double threshold() const { return threshold_; }

 private:
  friend PiecewiseVirtual assemble_ironed(const Prior&, double, double,
                                          const QuantileHull&, int);
  PiecewiseVirtual(Prior prior, double gamma, double signal, double threshold)
      : prior_(std::move(prior)), gamma_(gamma), signal_(signal), threshold_(threshold) {}

  double eval_piece(const Piece& p, double v) const;

  Prior prior_;
  double gamma_, signal_, threshold_;
  std::vector<Piece> pieces_;
};

// Builds the closed-form ironed virtual value. Refuses priors that fail the
// regularity check unless check_regularity is false (the characterization
// can be wrong for irregular priors; the oracle below stays valid).
PiecewiseVirtual ironed_virtual(const Prior& prior, double gamma, double s,
                                int grid_size, bool check_regularity = true);

// Generalized-convex-hull ironing of the revenue primitive, following the
// construction for distributions without densities: lower hull of the
// (F_{gamma,s}(y), H_{F_{gamma,s}}(y)) cloud in quantile space, with the
// signal atom represented by its two endpoint quantiles. Valid for
// arbitrary (also irregular) priors; used as the verification oracle and as
// the fallback mechanism for irregular priors.
class SampledVirtual {
 public:
  double operator()(double v) const;

  // inf{v : l(v) >= z} for the step function l; returns the value coordinate
  // of the first hull vertex whose outgoing edge reaches slope z.
  double pseudo_inverse(double z) const;

  double max_value() const { return slopes_.empty() ? 0.0 : slopes_.back(); }

 private:
  friend SampledVirtual build_oracle(const Prior&, double, std::optional<double>, int);
  friend SampledVirtual oracle_from_points(Prior, double, std::optional<double>,
                                           const std::vector<double>&,
                                           const std::vector<double>&,
                                           const std::vector<double>&);
  Prior prior_;
  double gamma_;
  std::optional<double> signal_;
  std::vector<double> vertex_q_, vertex_v_, slopes_;

  explicit SampledVirtual(Prior prior) : prior_(std::move(prior)), gamma_(1.0) {}
};

SampledVirtual monteiro_oracle(const HallucinationPosterior& post, int grid_size);

// No-atom variant (gamma = 1): irons the plain prior on its whole support.
SampledVirtual monteiro_oracle(const Prior& prior, int grid_size);

// Shared-table builders used by the Monte-Carlo signal cache: both take the
// prior's quantile grid u (ascending, 0..1), the matching values v, and a
// per-node cumulative/primitive column, so that building the object for one
// signal is a linear pass instead of fresh quadrature.
//
// `u`, `v`, `J` as in the master ironing table: J is the cumulative
// virtual-mass integral of the gamma-scaled prior up to v.
PiecewiseVirtual ironed_virtual_from_tables(const Prior& prior, double gamma, double s,
                                            std::span<const double> u,
                                            std::span<const double> v,
                                            std::span<const double> J);

// `H` holds the revenue primitive at each node.
SampledVirtual oracle_from_tables(const Prior& prior, double gamma, double s,
                                  std::span<const double> u,
                                  std::span<const double> v,
                                  std::span<const double> H);

}  // namespace predauct
