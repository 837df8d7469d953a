#include "predauct/auctions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "predauct/errors.hpp"
#include "predauct/numeric.hpp"
#include "predauct/pricing.hpp"
#include "predauct/rng.hpp"

namespace predauct {

std::string ReservePolicy::name() const {
  switch (type) {
    case Type::SpaIgnore: return "spa_ignore";
    case Type::SignalEager: return "signal_eager";
    case Type::KUncapped: return "k_uncapped_" + std::to_string(k);
    case Type::Hybrid: return "hybrid";
  }
  return "?";
}

std::string auction_name(const AuctionSpec& spec) {
  if (std::holds_alternative<OptimalAuction>(spec)) return "optimal";
  return std::get<ReservePolicy>(spec).name();
}

AuctionOutcome eager_run(std::span<const double> values,
                         std::span<const double> reserves) {
  if (values.empty() || values.size() != reserves.size())
    throw std::domain_error("eager_run: values/reserves size mismatch");
  AuctionOutcome out;
  out.payments.assign(values.size(), 0.0);
  int winner = -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < reserves[i]) continue;
    if (winner < 0 || values[i] > values[static_cast<std::size_t>(winner)]) winner = static_cast<int>(i);
  }
  if (winner < 0) return out;
  double best_other = -1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (static_cast<int>(i) == winner || values[i] < reserves[i]) continue;
    best_other = std::max(best_other, values[i]);
  }
  out.winner = winner;
  out.payment = std::max(reserves[static_cast<std::size_t>(winner)], best_other);
  out.payments[static_cast<std::size_t>(winner)] = out.payment;
  return out;
}

namespace {

// Indices of the k largest signals, ranks tied by lower index.
std::vector<bool> top_k_mask(std::span<const double> signals, int k) {
  std::vector<std::size_t> order(signals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return signals[i] > signals[j]; });
  std::vector<bool> mask(signals.size(), false);
  for (int r = 0; r < k; ++r) mask[order[static_cast<std::size_t>(r)]] = true;
  return mask;
}

}  // namespace

std::vector<double> reserves_for(const ReservePolicy& policy,
                                 std::span<const double> signals, const Prior& prior,
                                 double gamma, int grid_size) {
  const std::size_t n = signals.size();
  std::vector<double> r(n, 0.0);
  switch (policy.type) {
    case ReservePolicy::Type::SpaIgnore: {
      const double p0 = monopoly_price(prior, grid_size);
      std::fill(r.begin(), r.end(), p0);
      return r;
    }
    case ReservePolicy::Type::SignalEager:
      std::copy(signals.begin(), signals.end(), r.begin());
      return r;
    case ReservePolicy::Type::KUncapped: {
      if (policy.k < 0 || static_cast<std::size_t>(policy.k) > n)
        throw std::domain_error("reserves_for: k outside [0, n]");
      const std::vector<bool> uncap = top_k_mask(signals, policy.k);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = optimal_price(prior, gamma, signals[i], grid_size).price;
        r[i] = uncap[i] ? std::max(signals[i], p) : p;
      }
      return r;
    }
    case ReservePolicy::Type::Hybrid:
      throw std::domain_error(
          "reserves_for: hybrid selects a constituent per gamma from estimated "
          "revenue, not per signal profile");
  }
  throw std::domain_error("reserves_for: unknown policy");
}

AuctionOutcome optimal_run(std::span<const double> values,
                           std::span<const PiecewiseVirtual> psis) {
  if (values.empty() || values.size() != psis.size())
    throw std::domain_error("optimal_run: values/psis size mismatch");
  AuctionOutcome out;
  out.payments.assign(values.size(), 0.0);
  int winner = -1;
  double best = 0.0, second = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double ironed = psis[i](values[i]);
    if (ironed < 0.0) continue;
    if (winner < 0 || ironed > best) {
      if (winner >= 0) second = std::max(second, best);
      best = ironed;
      winner = static_cast<int>(i);
    } else {
      second = std::max(second, ironed);
    }
  }
  if (winner < 0) return out;
  const double level = std::max(0.0, second);
  out.winner = winner;
  out.payment = psis[static_cast<std::size_t>(winner)].pseudo_inverse(level);
  out.payments[static_cast<std::size_t>(winner)] = out.payment;
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo machinery
// ---------------------------------------------------------------------------

namespace {

// Fast p*(s) lookup for reserve policies. A quantile-spaced price grid makes
// the prefix/suffix argmax construction exact on the grid for every signal
// at once, brute-force style, including non-log-concave priors.
class ReserveTable {
 public:
  ReserveTable(const Prior& prior, double gamma, int grid_points = 8192)
      : prior_(prior), gamma_(gamma) {
    const int n = grid_points;
    price_.resize(n + 1);
    below_.resize(n + 1);   // u1(p) = p (1 - gamma F(p)), price posted at or below s
    above_.resize(n + 1);   // u2(p) = u1(p) - p (1 - gamma), price above s
    for (int j = 0; j <= n; ++j) {
      const double q = static_cast<double>(j) / n;
      price_[j] = prior_.quantile(q);
      below_[j] = price_[j] * (1.0 - gamma_ * q);
      above_[j] = below_[j] - price_[j] * (1.0 - gamma_);
    }
    best_below_.resize(n + 1);
    best_above_.resize(n + 2);
    int arg = 0;
    for (int j = 0; j <= n; ++j) {
      if (below_[j] > below_[arg]) arg = j;
      best_below_[j] = arg;
    }
    best_above_[n + 1] = -1;
    arg = n;
    for (int j = n; j >= 0; --j) {
      if (above_[j] > above_[arg]) arg = j;
      best_above_[j] = arg;
    }
  }

  double price_for(double s) const {
    const int n = static_cast<int>(price_.size()) - 1;
    const double qs = prior_.cdf(s);
    int j = static_cast<int>(std::floor(qs * n));
    j = std::clamp(j, 0, n);
    // candidates: the best grid price at or below s, posting exactly s, and
    // the best grid price strictly above s; ties to the smaller price
    double best_p = price_[best_below_[j]];
    double best_r = below_[best_below_[j]];
    const double rev_at_s = s * (1.0 - gamma_ * qs);
    if (rev_at_s > best_r || (rev_at_s == best_r && s < best_p)) {
      best_r = rev_at_s;
      best_p = s;
    }
    for (int jj = j + 1; jj <= n;) {
      const int cand = best_above_[jj];
      if (cand < 0) break;
      if (price_[cand] > s && above_[cand] > best_r) {
        best_r = above_[cand];
        best_p = price_[cand];
      }
      break;
    }
    return best_p;
  }

 private:
  Prior prior_;
  double gamma_;
  std::vector<double> price_, below_, above_;
  std::vector<int> best_below_;
  std::vector<int> best_above_;
};

// Ironed virtual value keyed by signal bucket (1e-4 quantile buckets), with
// shared master tables so each bucket build is a prefix scan, not fresh
// quadrature. Regular priors use the closed form; irregular priors fall
// back to the generalized-hull construction, which stays valid for them.
class PsiCache {
 public:
  PsiCache(const Prior& prior, double gamma, int grid_size)
      : prior_(prior), gamma_(gamma), regular_(prior.is_regular(2000)) {
    const int n = std::max(grid_size, 2000);
    u_.resize(n + 1);
    v_.resize(n + 1);
    J_.resize(n + 1);
    H_.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
      u_[j] = static_cast<double>(j) / n;
      v_[j] = prior_.quantile(u_[j]);
      H_[j] = prior_.revenue_primitive(v_[j]);
    }
    auto integrand = [&](double x) {
      return gamma_ * x * prior_.pdf(x) + gamma_ * prior_.cdf(x) - 1.0;
    };
    J_[0] = 0.0;
    for (int j = 0; j < n; ++j)
      J_[j + 1] = J_[j] + gauss3(integrand, v_[j], v_[j + 1]);
  }

  bool regular() const { return regular_; }

  double eval(double s, double v) {
    return regular_ ? (*closed(s))(v) : (*oracle(s))(v);
  }

  // Payment for a winner with true signal s. The cached object places the
  // atom at the bucket's lower edge; when the pseudo-inverse lands exactly
  // there, the level was absorbed by the atom jump, and the payment under
  // the true posterior is the true signal. Heavy-tailed supports make the
  // top buckets wide in value, so this substitution matters.
  double payment(double s, double level) {
    const double cached_s = bucket_signal(bucket_of(s));
    const double pay = regular_ ? closed(s)->pseudo_inverse(level)
                                : oracle(s)->pseudo_inverse(level);
    const double eps = 1e-9 * (prior_.hi() - prior_.lo());
    if (std::abs(pay - cached_s) <= eps && s > pay) return s;
    return pay;
  }

 private:
  static constexpr double kBucket = 1e-4;

  long bucket_of(double s) const {
    return std::lround(std::floor(prior_.cdf(s) / kBucket));
  }
  // The representative signal is the bucket's lower edge: every true signal
  // in the bucket sits at or above it, so atom draws (value == signal) land
  // on the cached flat rather than below the cached atom.
  double bucket_signal(long b) const {
    const double q = std::clamp(static_cast<double>(b) * kBucket, 0.0, 1.0);
    return prior_.quantile(q);
  }

  const PiecewiseVirtual* closed(double s) {
    const long b = bucket_of(s);
    auto it = closed_.find(b);
    if (it == closed_.end())
      it = closed_.emplace(b, build_closed(bucket_signal(b))).first;
    return &it->second;
  }
  const SampledVirtual* oracle(double s) {
    const long b = bucket_of(s);
    auto it = oracle_.find(b);
    if (it == oracle_.end())
      it = oracle_.emplace(b, build_oracle_at(bucket_signal(b))).first;
    return &it->second;
  }

  PiecewiseVirtual build_closed(double s) const;
  SampledVirtual build_oracle_at(double s) const;

  Prior prior_;
  double gamma_;
  bool regular_;
  std::vector<double> u_, v_, J_, H_;
  std::unordered_map<long, PiecewiseVirtual> closed_;
  std::unordered_map<long, SampledVirtual> oracle_;
};

PiecewiseVirtual PsiCache::build_closed(double s) const {
  return ironed_virtual_from_tables(prior_, gamma_, s, u_, v_, J_);
}

SampledVirtual PsiCache::build_oracle_at(double s) const {
  return oracle_from_tables(prior_, gamma_, s, u_, v_, H_);
}

struct DrawBuffer {
  std::vector<double> values, signals;
};

void draw_profile(const Prior& prior, double gamma, int n_buyers, Rng& rng,
                  DrawBuffer& buf) {
  buf.values.resize(n_buyers);
  buf.signals.resize(n_buyers);
  for (int i = 0; i < n_buyers; ++i) {
    const double v = prior.sample(rng);
    const bool hallucinated = rng.uniform01() < gamma;
    const double w = prior.sample(rng);
    buf.values[i] = v;
    buf.signals[i] = hallucinated ? w : v;
  }
}

McResult summarize(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= std::max(1.0, n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

McSweep mc_revenue_sweep(const Prior& prior, double gamma, int n_buyers,
                         std::span<const AuctionSpec> specs, long n_samples,
                         std::uint64_t seed, int grid_size, bool keep_samples) {
  if (n_samples < 1) throw std::domain_error("mc_revenue_sweep: n_samples < 1");
  if (n_buyers < 1) throw std::domain_error("mc_revenue_sweep: n_buyers < 1");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("mc_revenue_sweep: gamma outside (0,1)");

  const bool needs_optimal = std::any_of(
      specs.begin(), specs.end(),
      [](const AuctionSpec& a) { return std::holds_alternative<OptimalAuction>(a); });
  const bool needs_pstar =
      std::any_of(specs.begin(), specs.end(), [](const AuctionSpec& a) {
        return std::holds_alternative<ReservePolicy>(a) &&
               std::get<ReservePolicy>(a).type == ReservePolicy::Type::KUncapped;
      });
  const bool needs_hybrid =
      std::any_of(specs.begin(), specs.end(), [](const AuctionSpec& a) {
        return std::holds_alternative<ReservePolicy>(a) &&
               std::get<ReservePolicy>(a).type == ReservePolicy::Type::Hybrid;
      });

  std::optional<PsiCache> psi;
  if (needs_optimal) psi.emplace(prior, gamma, grid_size);
  std::optional<ReserveTable> pstar;
  if (needs_pstar) pstar.emplace(prior, gamma);
  const double p_monopoly = monopoly_price(prior, std::max(grid_size, 2000));

  const std::size_t n_specs = specs.size();
  std::vector<std::vector<double>> revenue(n_specs);
  for (auto& col : revenue) col.reserve(static_cast<std::size_t>(n_samples));
  std::vector<double> rev_spa, rev_se;  // hybrid constituents under the same draws
  if (needs_hybrid) {
    rev_spa.reserve(static_cast<std::size_t>(n_samples));
    rev_se.reserve(static_cast<std::size_t>(n_samples));
  }

  Rng rng(seed);
  DrawBuffer buf;
  std::vector<double> reserves;
  std::vector<double> ironed;

  for (long it = 0; it < n_samples; ++it) {
    draw_profile(prior, gamma, n_buyers, rng, buf);
    const int n = n_buyers;

    double spa_rev = 0.0, se_rev = 0.0;
    if (needs_hybrid) {
      reserves.assign(buf.values.size(), p_monopoly);
      spa_rev = eager_run(buf.values, reserves).payment;
      se_rev = eager_run(buf.values, buf.signals).payment;
      rev_spa.push_back(spa_rev);
      rev_se.push_back(se_rev);
    }

    double opt_rev = 0.0;
    if (needs_optimal) {
      // allocation by highest non-negative ironed virtual value
      ironed.resize(static_cast<std::size_t>(n));
      int winner = -1;
      double best = 0.0, second = 0.0;
      for (int i = 0; i < n; ++i) {
        ironed[static_cast<std::size_t>(i)] = psi->eval(buf.signals[static_cast<std::size_t>(i)], buf.values[static_cast<std::size_t>(i)]);
        const double x = ironed[static_cast<std::size_t>(i)];
        if (x < 0.0) continue;
        if (winner < 0 || x > best) {
          if (winner >= 0) second = std::max(second, best);
          best = x;
          winner = i;
        } else {
          second = std::max(second, x);
        }
      }
      if (winner >= 0)
        opt_rev = psi->payment(buf.signals[static_cast<std::size_t>(winner)],
                               std::max(0.0, second));
    }

    for (std::size_t a = 0; a < n_specs; ++a) {
      const AuctionSpec& spec = specs[a];
      if (std::holds_alternative<OptimalAuction>(spec)) {
        revenue[a].push_back(opt_rev);
        continue;
      }
      const ReservePolicy& pol = std::get<ReservePolicy>(spec);
      switch (pol.type) {
        case ReservePolicy::Type::SpaIgnore:
          if (needs_hybrid) {
            revenue[a].push_back(spa_rev);
          } else {
            reserves.assign(buf.values.size(), p_monopoly);
            revenue[a].push_back(eager_run(buf.values, reserves).payment);
          }
          break;
        case ReservePolicy::Type::SignalEager:
          revenue[a].push_back(needs_hybrid
                                   ? se_rev
                                   : eager_run(buf.values, buf.signals).payment);
          break;
        case ReservePolicy::Type::KUncapped: {
          if (pol.k < 0 || pol.k > n)
            throw std::domain_error("mc_revenue_sweep: k outside [0, n]");
          const std::vector<bool> uncap = top_k_mask(buf.signals, pol.k);
          reserves.resize(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i) {
            const double p = pstar->price_for(buf.signals[static_cast<std::size_t>(i)]);
            reserves[static_cast<std::size_t>(i)] =
                uncap[static_cast<std::size_t>(i)]
                    ? std::max(buf.signals[static_cast<std::size_t>(i)], p)
                    : p;
          }
          revenue[a].push_back(eager_run(buf.values, reserves).payment);
          break;
        }
        case ReservePolicy::Type::Hybrid:
          revenue[a].push_back(0.0);  // resolved after the means are known
          break;
      }
    }
  }

  // hybrid = the constituent with the higher estimated revenue at this gamma
  if (needs_hybrid) {
    const McResult spa = summarize(rev_spa), se = summarize(rev_se);
    const std::vector<double>& chosen = spa.mean >= se.mean ? rev_spa : rev_se;
    for (std::size_t a = 0; a < n_specs; ++a) {
      if (std::holds_alternative<ReservePolicy>(specs[a]) &&
          std::get<ReservePolicy>(specs[a]).type == ReservePolicy::Type::Hybrid)
        revenue[a] = chosen;
    }
  }

  McSweep out;
  out.auctions.reserve(n_specs);
  out.diff_vs_first.reserve(n_specs);
  for (std::size_t a = 0; a < n_specs; ++a) out.auctions.push_back(summarize(revenue[a]));
  std::vector<double> diff(static_cast<std::size_t>(n_samples));
  for (std::size_t a = 0; a < n_specs; ++a) {
    for (long i = 0; i < n_samples; ++i)
      diff[static_cast<std::size_t>(i)] =
          revenue[a][static_cast<std::size_t>(i)] - revenue[0][static_cast<std::size_t>(i)];
    out.diff_vs_first.push_back(summarize(diff));
  }
  if (keep_samples) out.samples = std::move(revenue);
  return out;
}

McResult mc_revenue(const Prior& prior, double gamma, int n_buyers,
                    const AuctionSpec& auction, long n_samples, std::uint64_t seed) {
  const AuctionSpec specs[] = {auction};
  return mc_revenue_sweep(prior, gamma, n_buyers, specs, n_samples, seed).auctions[0];
}

// ---------------------------------------------------------------------------
// Exact two-buyer revenue
// ---------------------------------------------------------------------------

namespace {

constexpr int kExactNodes = 2001;

// integral of t f(t) over [lo, hi] (clamped to the support)
double partial_expectation(const Prior& prior, double lo, double hi) {
  lo = std::max(lo, prior.lo());
  hi = std::min(hi, prior.hi());
  if (hi <= lo) return 0.0;
  return simpson([&](double t) { return t * prior.pdf(t); }, lo, hi, kExactNodes);
}

double mass(const Prior& prior, double lo, double hi) {
  lo = std::clamp(lo, prior.lo(), prior.hi());
  hi = std::clamp(hi, prior.lo(), prior.hi());
  if (hi <= lo) return 0.0;
  return prior.cdf(hi) - prior.cdf(lo);
}

// integral of max(c, t) f(t) over [lo, hi]
double expected_max_price(const Prior& prior, double c, double lo, double hi) {
  lo = std::max(lo, prior.lo());
  hi = std::min(hi, prior.hi());
  if (hi <= lo) return 0.0;
  if (c <= lo) return partial_expectation(prior, lo, hi);
  if (c >= hi) return c * mass(prior, lo, hi);
  return c * mass(prior, lo, c) + partial_expectation(prior, c, hi);
}

// integral of max(c, t) (1 - F(max(c, t))) f(t) over [lo, hi]
double expected_threshold_revenue(const Prior& prior, double c, double lo, double hi) {
  lo = std::max(lo, prior.lo());
  hi = std::min(hi, prior.hi());
  if (hi <= lo) return 0.0;
  auto g = [&](double t) { return t * (1.0 - prior.cdf(t)) * prior.pdf(t); };
  double acc = 0.0;
  if (c > lo) {
    const double upto = std::min(c, hi);
    acc += c * (1.0 - prior.cdf(std::clamp(c, prior.lo(), prior.hi()))) *
           mass(prior, lo, upto);
  }
  if (hi > c) acc += simpson(g, std::max(lo, c), hi, kExactNodes);
  return acc;
}

// Expected total payment when buyer `fixed` bids exactly x and the other
// buyer's value is drawn from the prior. Tie-breaking favours buyer 0.
double det_cont_revenue(const Prior& prior, double x, double r_fixed, double r_cont) {
  if (x < r_fixed) {
    // lone continuous bidder against its own reserve
    return r_cont * (1.0 - prior.cdf(std::clamp(r_cont, prior.lo(), prior.hi())));
  }
  double acc = r_fixed * mass(prior, prior.lo(), r_cont);  // rival inactive
  // rival active and below x: the fixed buyer wins, pays max(r_fixed, rival
  // bid); equal bids are a measure-zero event here
  acc += expected_max_price(prior, r_fixed, r_cont, std::min(x, prior.hi()));
  // rival active and above x: rival wins, pays max(own reserve, x)
  const double lo_lose = std::max(r_cont, x);
  acc += lo_lose *
         (1.0 - prior.cdf(std::clamp(lo_lose, prior.lo(), prior.hi())));
  return acc;
}

// Expected total payment with both values drawn from the prior.
double cont_cont_revenue(const Prior& prior, double r1, double r2) {
  auto leg = [&](double r_win, double r_other) {
    // winner's expected payment: other inactive (pays own reserve), or
    // active-but-lower (pays max(reserve, other bid))
    const double solo = r_win * mass(prior, prior.lo(), r_other) *
                        (1.0 - prior.cdf(std::clamp(r_win, prior.lo(), prior.hi())));
    const double versus =
        expected_threshold_revenue(prior, r_win, r_other, prior.hi());
    return solo + versus;
  };
  return leg(r1, r2) + leg(r2, r1);
}

}  // namespace

double exact_two_buyer_revenue(const Prior& prior, double gamma,
                               std::pair<double, double> signals,
                               const ReservePolicy& policy, int grid_size) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("exact_two_buyer_revenue: gamma outside (0,1)");
  const double sig[2] = {signals.first, signals.second};
  const std::vector<double> r = reserves_for(policy, sig, prior, gamma, grid_size);

  const double g = gamma;
  // both signals accurate: a deterministic profile
  const double vals_aa[2] = {sig[0], sig[1]};
  const double rev_aa = eager_run(vals_aa, r).payment;
  // one accurate, one hallucinated
  const double rev_ac = det_cont_revenue(prior, sig[0], r[0], r[1]);
  const double rev_ca = det_cont_revenue(prior, sig[1], r[1], r[0]);
  // both hallucinated
  const double rev_cc = cont_cont_revenue(prior, r[0], r[1]);

  return (1.0 - g) * (1.0 - g) * rev_aa + (1.0 - g) * g * rev_ac +
         g * (1.0 - g) * rev_ca + g * g * rev_cc;
}

// ---------------------------------------------------------------------------
// Full-surplus demonstration on the two-point prior
// ---------------------------------------------------------------------------

FullSurplusReport full_surplus_demo(double alpha, double gamma, double eps) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("full_surplus_demo: alpha outside (0,1)");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::domain_error("full_surplus_demo: eps outside (0,1)");
  if (!(gamma > 0.0) || gamma >= 1.0) {
    if (gamma == 1.0)
      throw SingularSystemError("full_surplus_demo: gamma = 1 makes the signal "
                                "moments indistinguishable across types");
    throw std::domain_error("full_surplus_demo: gamma outside (0,1)");
  }

  FullSurplusReport rep;
  rep.alpha = alpha;
  rep.gamma = gamma;
  rep.eps = eps;
  rep.q1 = 1.0 - gamma + gamma * alpha;  // P(s=1 | v=1)
  rep.q2 = gamma * alpha;                // P(s=1 | v=2)
  rep.c1 = (1.0 - rep.q2) / (1.0 - gamma);
  rep.c2 = -rep.q2 / (1.0 - gamma);

  const double w[2] = {rep.c1, rep.c2};
  for (int s = 0; s < 2; ++s) {
    rep.payments[0][s] = 1.0 - eps + 2.0 * (1.0 - w[s]);
    rep.payments[1][s] = 2.0 - eps + 2.0 * w[s];
  }
  const double p_sig1[2] = {rep.q1, rep.q2};  // P(s=1 | v)
  for (int v = 0; v < 2; ++v) {
    for (int hat = 0; hat < 2; ++hat) {
      const double expected_payment =
          p_sig1[v] * rep.payments[hat][0] + (1.0 - p_sig1[v]) * rep.payments[hat][1];
      rep.interim[v][hat] = (v + 1.0) - expected_payment;
    }
  }
  rep.ic_ok = rep.interim[0][0] > rep.interim[0][1] &&
              rep.interim[1][1] > rep.interim[1][0];
  rep.ir_ok = rep.interim[0][0] > 0.0 && rep.interim[1][1] > 0.0;
  rep.revenue = alpha * (p_sig1[0] * rep.payments[0][0] +
                         (1.0 - p_sig1[0]) * rep.payments[0][1]) +
                (1.0 - alpha) * (p_sig1[1] * rep.payments[1][0] +
                                 (1.0 - p_sig1[1]) * rep.payments[1][1]);
  return rep;
}

}  // namespace predauct
