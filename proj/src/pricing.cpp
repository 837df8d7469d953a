#include "predauct/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "predauct/errors.hpp"
#include "predauct/ironing.hpp"
#include "predauct/numeric.hpp"

namespace predauct {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Ignore: return "ignore";
    case Regime::Follow: return "follow";
    case Regime::Cap: return "cap";
    case Regime::FollowAgain: return "follow_again";
    case Regime::Unclassified: return "unclassified";
  }
  return "?";
}

double revenue_at(const HallucinationPosterior& post, double p) {
  return p * (1.0 - post.cdf_left(p));
}

double brute_force_price(const HallucinationPosterior& post, int grid_size) {
  if (grid_size < 1000) throw std::domain_error("brute_force_price: grid_size < 1000");
  const double a = post.prior.lo(), b = post.prior.hi();
  const double h = (b - a) / grid_size;
  std::vector<double> grid = linspace(a, b, grid_size + 1);
  for (double extra : {post.signal - h, post.signal, post.signal + h})
    if (extra >= a && extra <= b) grid.push_back(extra);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double best_p = grid.front(), best_r = revenue_at(post, grid.front());
  for (double p : grid) {
    const double r = revenue_at(post, p);
    if (r > best_r) {
      best_r = r;
      best_p = p;
    }
  }
  return best_p;
}

namespace {

// Refines a sign change of fn bracketed by [lo, hi] (fn(lo) and fn(hi) on
// opposite sides of zero) down to xtol.
template <class F>
double refine_crossing(F&& fn, double lo, double hi, double xtol) {
  return bisect(std::forward<F>(fn), lo, hi, xtol);
}

}  // namespace

double monopoly_price(const Prior& prior, int grid_size, double tol) {
  const double a = prior.lo(), b = prior.hi();
  const std::vector<double> grid = linspace(a, b, grid_size + 1);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (prior.virtual_value(grid[k]) >= 0.0) {
      if (k == 0) return a;
      return bisect([&](double v) { return prior.virtual_value(v); }, grid[k - 1],
                    grid[k], tol);
    }
  }
  return b;
}

Thresholds compute_thresholds(const Prior& prior, double gamma, int grid_size,
                              double tol) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("compute_thresholds: gamma outside (0,1)");
  if (grid_size < 100) throw std::domain_error("compute_thresholds: grid_size < 100");
  const double a = prior.lo(), b = prior.hi();
  const double span_eps = 1e-12 * (b - a);
  auto phig = [&](double v) { return prior.scaled_virtual_value(gamma, v); };
  auto u = [&](double p) { return p * (1.0 - gamma * prior.cdf(p)); };
  const std::vector<double> grid = linspace(a, b, grid_size + 1);

  Thresholds th;
  th.p_ignore = monopoly_price(prior, grid_size, tol);

  // sign changes of the scaled virtual value
  std::vector<double> crossings;  // refined locations, alternating signs
  bool prev_neg = phig(grid[0]) < 0.0;
  th.scaled_virtual_negative_at_lo = prev_neg;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const bool neg = phig(grid[k]) < 0.0;
    if (neg != prev_neg) {
      crossings.push_back(
          refine_crossing([&](double v) { return phig(v); }, grid[k - 1], grid[k], tol));
      prev_neg = neg;
    }
  }
  if (crossings.size() > 2)
    throw NotLogConcaveError(
        "compute_thresholds: scaled virtual value has more than two sign changes");

  if (th.scaled_virtual_negative_at_lo) {
    // phi_{gamma F}(a) < 0: negative, then possibly a non-negative interval
    const double M = crossings.empty() ? b : crossings[0];
    const double nonneg_hi = crossings.size() >= 2 ? crossings[1] : b;
    th.M = th.p_cap = M;
    th.m = a;
    th.C = nonneg_hi < b - span_eps ? b : (crossings.empty() ? b : M);

    if (th.p_ignore <= a + span_eps) {
      th.L = a;
    } else {
      auto gap = [&](double s) { return mu(prior, gamma, s, th.p_ignore); };
      th.L = gap(a) >= 0.0 ? a : refine_crossing(gap, a, th.p_ignore, tol);
    }

    if (M >= b - span_eps) {
      th.U = b;
    } else {
      const double uM = u(M);
      if (u(b) <= uM)
        th.U = b;
      else
        th.U = refine_crossing([&](double p) { return u(p) - uM; },
                               std::max(nonneg_hi, M), b, tol);
    }
  } else {
    // phi_{gamma F}(a) >= 0: possibly a negative dip [m, C]
    if (crossings.empty()) {
      th.m = b;  // inf of an empty set
      th.C = a;  // sup of an empty set
      th.p_cap = th.M = a;
      th.L = a;
      th.U = b;
    } else {
      th.m = crossings[0];
      th.C = crossings.size() >= 2 ? crossings[1] : b;
      th.p_cap = th.M = (u(a) <= u(th.C)) ? th.C : a;
      // first price whose posted revenue beats posting at the floor
      double first_above = b;
      const double ua = u(a);
      for (std::size_t k = 1; k < grid.size(); ++k) {
        if (u(grid[k]) > ua) {
          first_above = refine_crossing([&](double p) { return u(p) - ua; },
                                        grid[k - 1], grid[k], tol);
          break;
        }
      }
      th.L = std::min(first_above, th.M);
      const double uM = u(th.M);
      if (u(b) <= uM)
        th.U = b;
      else
        th.U = refine_crossing([&](double p) { return u(p) - uM; },
                               std::max(th.C, th.M), b, tol);
    }
  }
  return th;
}

PricedSignal optimal_price(const Thresholds& th, double s) {
  if (s < th.L) return {th.p_ignore, Regime::Ignore};
  if (s < th.M) return {s, Regime::Follow};
  if (s <= th.U) return {th.p_cap, Regime::Cap};
  return {s, Regime::FollowAgain};
}

PricedSignal optimal_price(const Prior& prior, double gamma, double s, int grid_size) {
  return optimal_price(compute_thresholds(prior, gamma, grid_size), s);
}

namespace {

// Shared grid machinery for the noise and hybrid price rules: cumulative
// mass of f(v) * kernel(s - v) above each grid point, on a grid that
// resolves both the support and the kernel width.
struct NoiseTails {
  std::vector<double> price;
  std::vector<double> noise_tail;  // unnormalized integral of f * kernel above p
  double noise_total;
};

NoiseTails noise_tail_table(const Prior& prior, double sigma, double s,
                            int grid_size) {
  const double a = prior.lo(), b = prior.hi();
  const double clip_lo = std::max(a, s - 8.0 * sigma);
  const double clip_hi = std::min(b, s + 8.0 * sigma);
  NoiseTails t;
  t.price = linspace(a, b, grid_size + 1);
  if (clip_hi > clip_lo) {
    std::vector<double> fine = linspace(clip_lo, clip_hi, 4001);
    t.price.insert(t.price.end(), fine.begin(), fine.end());
  }
  std::sort(t.price.begin(), t.price.end());
  t.price.erase(std::unique(t.price.begin(), t.price.end()), t.price.end());

  const std::size_t n = t.price.size();
  t.noise_tail.assign(n, 0.0);
  const double inv = 1.0 / sigma;
  auto integrand = [&](double v) {
    if (v < clip_lo || v > clip_hi) return 0.0;
    const double z = (s - v) * inv;
    return prior.pdf(v) * 0.39894228040143267794 * std::exp(-0.5 * z * z) * inv;
  };
  for (std::size_t k = n - 1; k-- > 0;) {
    t.noise_tail[k] =
        t.noise_tail[k + 1] + gauss3(integrand, t.price[k], t.price[k + 1]);
  }
  t.noise_total = t.noise_tail[0];
  return t;
}

double argmax_price(const std::vector<double>& price, const std::vector<double>& rev) {
  double best_p = price[0], best_r = rev[0];
  for (std::size_t k = 1; k < price.size(); ++k) {
    if (rev[k] > best_r) {
      best_r = rev[k];
      best_p = price[k];
    }
  }
  return best_p;
}

}  // namespace

double noise_price(const Prior& prior, double sigma, double s, int grid_size) {
  if (!(sigma > 0.0)) throw std::domain_error("noise_price: sigma must be > 0");
  const NoiseTails t = noise_tail_table(prior, sigma, s, grid_size);
  if (t.noise_total < 1e-300)
    throw DegenerateSignalError("noise_price: signal incompatible with the support");
  std::vector<double> rev(t.price.size());
  for (std::size_t k = 0; k < t.price.size(); ++k)
    rev[k] = t.price[k] * t.noise_tail[k] / t.noise_total;
  return argmax_price(t.price, rev);
}

double hybrid_price(const Prior& prior, double gamma, double sigma, double s,
                    int grid_size) {
  if (!(sigma > 0.0)) throw std::domain_error("hybrid_price: sigma must be > 0");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("hybrid_price: gamma outside (0,1)");
  const NoiseTails t = noise_tail_table(prior, sigma, s, grid_size);
  const double f_s =
      (s >= prior.lo() && s <= prior.hi()) ? prior.pdf(s) : 0.0;
  const double den = (1.0 - gamma) * t.noise_total + gamma * f_s;
  if (den < 1e-300)
    throw DegenerateSignalError("hybrid_price: signal incompatible with the support");
  std::vector<double> rev(t.price.size());
  for (std::size_t k = 0; k < t.price.size(); ++k) {
    const double tail = (1.0 - gamma) * t.noise_tail[k] +
                        gamma * f_s * (1.0 - prior.cdf(t.price[k]));
    rev[k] = t.price[k] * tail / den;
  }
  return argmax_price(t.price, rev);
}

}  // namespace predauct
