#include "predauct/ironing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "predauct/errors.hpp"
#include "predauct/numeric.hpp"

namespace predauct {

std::vector<std::size_t> lower_hull_indices(const std::vector<double>& x,
                                            const std::vector<double>& y) {
  std::vector<std::size_t> hull;
  hull.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t i0 = hull[hull.size() - 2];
      const std::size_t i1 = hull[hull.size() - 1];
      const double cross =
          (x[i1] - x[i0]) * (y[i] - y[i0]) - (x[i] - x[i0]) * (y[i1] - y[i0]);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  return hull;
}

double QuantileHull::slope_at(double q) const {
  if (slopes.empty()) throw std::logic_error("slope_at: empty hull");
  std::size_t lo = 0, hi = hull.size() - 1;
  // first vertex with quantile >= q; its incoming edge is the answer
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (quantiles[hull[mid]] < q)
      lo = mid + 1;
    else
      hi = mid;
  }
  const std::size_t edge = std::clamp<std::size_t>(lo, 1, hull.size() - 1) - 1;
  return slopes[edge];
}

QuantileHull truncated_iron(const Prior& prior, double gamma, double t, int grid_size) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::domain_error("truncated_iron: gamma outside (0,1]");
  if (!(t > prior.lo()))
    throw std::domain_error("truncated_iron: truncation point at or below the support");
  if (grid_size < 100) throw std::domain_error("truncated_iron: grid_size < 100");
  t = std::min(t, prior.hi());

  QuantileHull h;
  const int n = grid_size;
  const double q_top = gamma * prior.cdf(t);
  h.quantiles = linspace(0.0, q_top, n + 1);
  h.values.resize(n + 1);
  for (int k = 0; k <= n; ++k)
    h.values[k] = prior.quantile(std::min(h.quantiles[k] / gamma, 1.0));
  h.values.back() = t;

  // J accumulated in value space: dJ = (gamma*x*f(x) + gamma*F(x) - 1) dx,
  // which stays bounded where the density vanishes at an endpoint.
  h.cumulative.assign(n + 1, 0.0);
  auto integrand = [&](double x) {
    return gamma * x * prior.pdf(x) + gamma * prior.cdf(x) - 1.0;
  };
  for (int k = 0; k < n; ++k)
    h.cumulative[k + 1] =
        h.cumulative[k] + gauss3(integrand, h.values[k], h.values[k + 1]);

  h.hull = lower_hull_indices(h.quantiles, h.cumulative);
  h.slopes.resize(h.hull.size() - 1);
  for (std::size_t e = 0; e + 1 < h.hull.size(); ++e) {
    const std::size_t i0 = h.hull[e], i1 = h.hull[e + 1];
    h.slopes[e] =
        (h.cumulative[i1] - h.cumulative[i0]) / (h.quantiles[i1] - h.quantiles[i0]);
  }
  return h;
}

double mu(const Prior& prior, double gamma, double s, double x) {
  if (x < s) throw std::domain_error("mu: x must be at or above the signal");
  const double phi_x = prior.virtual_value(x);
  const double F_x = prior.cdf(x);
  const double alpha = prior.revenue_primitive(x) - phi_x * F_x;
  return gamma * alpha + gamma * phi_x * prior.cdf(s) - (1.0 - gamma) * phi_x -
         gamma * prior.revenue_primitive(s) + (1.0 - gamma) * s;
}

double compute_T(const Prior& prior, double gamma, double s, double tol,
                 ThresholdDiagnostics* diag) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("compute_T: gamma outside (0,1)");
  if (s < prior.lo() || s >= prior.hi()) {
    if (s == prior.hi()) {
      if (diag) *diag = {0.0, 0, false};
      return prior.hi();
    }
    throw std::domain_error("compute_T: signal outside [lo, hi)");
  }
  if (!(tol > 0.0)) throw std::domain_error("compute_T: tol must be > 0");

  double lo = s, hi = prior.hi();
  const double mu_lo = mu(prior, gamma, s, lo);
  if (mu_lo <= 0.0) {
    if (diag) *diag = {mu_lo, 0, true};
    return s;
  }
  if (mu(prior, gamma, s, hi) >= 0.0) {
    if (diag) *diag = {mu(prior, gamma, s, hi), 0, false};
    return hi;
  }
  int iters = 0;
  while (hi - lo > tol && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    (mu(prior, gamma, s, mid) > 0.0 ? lo : hi) = mid;
    ++iters;
  }
  const double T = 0.5 * (lo + hi);
  if (diag) *diag = {mu(prior, gamma, s, T), iters, false};
  return T;
}

double PiecewiseVirtual::eval_piece(const Piece& p, double v) const {
  switch (p.kind) {
    case Kind::FollowScaledVirtual:
      return prior_.scaled_virtual_value(gamma_, v);
    case Kind::Constant:
      return p.value;
    case Kind::FollowPriorVirtual:
      return prior_.virtual_value(v);
  }
  return 0.0;
}

double PiecewiseVirtual::operator()(double v) const {
  if (v < prior_.lo() - 1e-12 || v > prior_.hi() + 1e-12)
    throw std::domain_error("PiecewiseVirtual: value outside support");
  v = std::clamp(v, prior_.lo(), prior_.hi());
  // pieces are half-open [lo, hi); the last piece is closed at the top
  std::size_t lo = 0, hi = pieces_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (pieces_[mid].lo <= v)
      lo = mid;
    else
      hi = mid - 1;
  }
  return eval_piece(pieces_[lo], v);
}

double PiecewiseVirtual::pseudo_inverse(double z) const {
  const double top = eval_piece(pieces_.back(), pieces_.back().hi);
  const double top_eps = 1e-12 + 1e-9 * (prior_.hi() - prior_.lo());
  if (z > top + top_eps)
    throw std::domain_error("pseudo_inverse: level above the maximum virtual value");
  z = std::min(z, top);
  for (const Piece& p : pieces_) {
    if (p.kind == Kind::Constant) {
      if (p.value >= z) return p.lo;
      continue;
    }
    const double at_hi = eval_piece(p, p.hi);
    if (at_hi < z) continue;
    const double at_lo = eval_piece(p, p.lo);
    if (at_lo >= z) return p.lo;
    return bisect([&](double v) { return eval_piece(p, v) - z; }, p.lo, p.hi,
                  1e-13 * (prior_.hi() - prior_.lo()) + 1e-300);
  }
  return pieces_.back().hi;
}

namespace {

// Root of phi_{gamma F} = level inside [lo, hi], when the bracket actually
// straddles the level; used to pin flat boundaries off the quantile grid.
std::optional<double> waterline(const Prior& prior, double gamma, double level,
                                double lo, double hi) {
  const double flo = prior.scaled_virtual_value(gamma, lo) - level;
  const double fhi = prior.scaled_virtual_value(gamma, hi) - level;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || flo * fhi > 0.0) return std::nullopt;
  return bisect(
      [&](double v) { return prior.scaled_virtual_value(gamma, v) - level; }, lo, hi,
      1e-14 * (prior.hi() - prior.lo()) + 1e-300);
}

}  // namespace

// Turns a truncated-ironing hull into tagged pieces and appends the
// post-signal flat and prior-virtual tail. The hull may be empty when the
// signal sits at the bottom of the support.
PiecewiseVirtual assemble_ironed(const Prior& prior, double gamma, double s,
                                 const QuantileHull& hull_in, int) {
  const double a = prior.lo(), b = prior.hi();
  const double span_eps = 1e-12 * (b - a);
  const double T = compute_T(prior, gamma, std::min(s, b), 1e-10);
  PiecewiseVirtual psi(prior, gamma, s, T);
  auto& pieces = psi.pieces_;

  if (s > a + span_eps && !hull_in.slopes.empty()) {
    const QuantileHull& hull = hull_in;
    // Flats are hull edges spanning more than one grid interval; their
    // boundaries get sharpened to the exact waterline phi_{gamma F} = slope.
    // Everything between flats follows phi_{gamma F} pointwise.
    std::vector<PiecewiseVirtual::Piece> flats;
    const std::size_t last = hull.values.size() - 1;
    for (std::size_t e = 0; e + 1 < hull.hull.size(); ++e) {
      const std::size_t k0 = hull.hull[e], k1 = hull.hull[e + 1];
      if (k1 - k0 <= 1) continue;
      const double c = hull.slopes[e];
      double lo = hull.values[k0], hi = hull.values[k1];
      if (k0 > 0) {
        if (auto w = waterline(prior, gamma, c, hull.values[k0 - 1],
                               hull.values[std::min(k0 + 1, last)]))
          lo = *w;
      }
      if (k1 < last) {
        if (auto w = waterline(prior, gamma, c, hull.values[k1 - 1],
                               hull.values[std::min(k1 + 1, last)]))
          hi = *w;
      }
      lo = std::clamp(lo, a, s);
      hi = std::clamp(hi, lo, s);
      if (!flats.empty()) lo = std::max(lo, flats.back().hi);
      if (hi > lo + span_eps)
        flats.push_back({lo, hi, PiecewiseVirtual::Kind::Constant, c});
    }
    double cursor = a;
    for (const auto& f : flats) {
      if (f.lo > cursor + span_eps)
        pieces.push_back({cursor, f.lo, PiecewiseVirtual::Kind::FollowScaledVirtual, 0.0});
      pieces.push_back(f);
      cursor = f.hi;
    }
    if (s > cursor + span_eps)
      pieces.push_back({cursor, s, PiecewiseVirtual::Kind::FollowScaledVirtual, 0.0});
  } else if (s > a + span_eps) {
    pieces.push_back({a, s, PiecewiseVirtual::Kind::FollowScaledVirtual, 0.0});
  }

  const double phi_T = prior.virtual_value(T);
  const double cursor = pieces.empty() ? std::min(s, b) : pieces.back().hi;
  if (T < b - span_eps) {
    if (T > cursor + span_eps)
      pieces.push_back({cursor, T, PiecewiseVirtual::Kind::Constant, phi_T});
    pieces.push_back({pieces.empty() ? cursor : pieces.back().hi, b,
                      PiecewiseVirtual::Kind::FollowPriorVirtual, 0.0});
  } else if (b > cursor + span_eps) {
    pieces.push_back({cursor, b, PiecewiseVirtual::Kind::Constant, phi_T});
  } else {
    pieces.back().hi = b;
  }
  return psi;
}

PiecewiseVirtual ironed_virtual(const Prior& prior, double gamma, double s,
                                int grid_size, bool check_regularity) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("ironed_virtual: gamma outside (0,1)");
  if (s < prior.lo() || s > prior.hi())
    throw std::domain_error("ironed_virtual: signal outside support");
  if (check_regularity && !prior.is_regular(std::max(1000, grid_size)))
    throw IrregularPriorError(
        "ironed_virtual: prior fails the regularity check; the closed form does not "
        "apply (use the oracle)");
  QuantileHull hull;
  if (s > prior.lo() + 1e-12 * (prior.hi() - prior.lo()))
    hull = truncated_iron(prior, gamma, s, grid_size);
  return assemble_ironed(prior, gamma, s, hull, grid_size);
}

PiecewiseVirtual ironed_virtual_from_tables(const Prior& prior, double gamma, double s,
                                            std::span<const double> u,
                                            std::span<const double> v,
                                            std::span<const double> J) {
  const double a = prior.lo(), b = prior.hi();
  QuantileHull hull;
  if (s > a + 1e-12 * (b - a)) {
    const double u_s = prior.cdf(s);
    // prefix of the master table strictly below the signal, plus an exact
    // endpoint at the signal quantile
    std::size_t j = 0;
    while (j + 1 < u.size() && v[j + 1] < s) ++j;
    hull.quantiles.reserve(j + 2);
    hull.cumulative.reserve(j + 2);
    hull.values.reserve(j + 2);
    for (std::size_t k = 0; k <= j; ++k) {
      hull.quantiles.push_back(gamma * u[k]);
      hull.cumulative.push_back(J[k]);
      hull.values.push_back(v[k]);
    }
    if (s > v[j] + 1e-15 * (b - a)) {
      auto integrand = [&](double x) {
        return gamma * x * prior.pdf(x) + gamma * prior.cdf(x) - 1.0;
      };
      hull.quantiles.push_back(gamma * u_s);
      hull.cumulative.push_back(J[j] + gauss3(integrand, v[j], s));
      hull.values.push_back(s);
    }
    hull.hull = lower_hull_indices(hull.quantiles, hull.cumulative);
    hull.slopes.resize(hull.hull.size() - 1);
    for (std::size_t e = 0; e + 1 < hull.hull.size(); ++e) {
      const std::size_t i0 = hull.hull[e], i1 = hull.hull[e + 1];
      hull.slopes[e] = (hull.cumulative[i1] - hull.cumulative[i0]) /
                       (hull.quantiles[i1] - hull.quantiles[i0]);
    }
  }
  return assemble_ironed(prior, gamma, s, hull, 0);
}

// ---------------------------------------------------------------------------
// Monteiro-style oracle
// ---------------------------------------------------------------------------

namespace {

double posterior_virtual(const Prior& prior, double gamma,
                         const std::optional<double>& s, double v) {
  if (s && v < *s) return prior.scaled_virtual_value(gamma, v);
  return prior.virtual_value(v);
}

// Quantile nodes for the hull cloud: a uniform base grid refined wherever
// the posterior virtual value varies by more than `tol` across a panel.
// Panels whose endpoint values both sit outside the window (huge-magnitude
// regions near vanishing densities) are left alone; slopes there are far
// from any allocation decision.
void refine_panel(const Prior& prior, double gamma, const std::optional<double>& s,
                  double u0, double u1, int depth, double tol, double window,
                  std::vector<double>& out) {
  const double v0 = prior.quantile(u0), v1 = prior.quantile(u1);
  const double p0 = posterior_virtual(prior, gamma, s, v0);
  const double p1 = posterior_virtual(prior, gamma, s, v1);
  const bool care = (std::isfinite(p0) && std::abs(p0) <= window) ||
                    (std::isfinite(p1) && std::abs(p1) <= window);
  const double variation =
      (std::isfinite(p0) && std::isfinite(p1)) ? std::abs(p1 - p0) : 1e308;
  if (depth >= 30 || !care || variation <= tol || v1 - v0 < 1e-15 * prior.hi()) {
    out.push_back(u0);
    return;
  }
  const double um = 0.5 * (u0 + u1);
  refine_panel(prior, gamma, s, u0, um, depth + 1, tol, window, out);
  refine_panel(prior, gamma, s, um, u1, depth + 1, tol, window, out);
}

}  // namespace

// Hull + vertex extraction over a prepared point cloud.
SampledVirtual oracle_from_points(Prior prior, double gamma, std::optional<double> s,
                                  const std::vector<double>& q,
                                  const std::vector<double>& h,
                                  const std::vector<double>& vv) {
  SampledVirtual out(std::move(prior));
  out.gamma_ = gamma;
  out.signal_ = s;
  const std::vector<std::size_t> hull = lower_hull_indices(q, h);
  out.vertex_q_.reserve(hull.size());
  out.vertex_v_.reserve(hull.size());
  out.slopes_.reserve(hull.size() - 1);
  for (std::size_t i : hull) {
    out.vertex_q_.push_back(q[i]);
    out.vertex_v_.push_back(vv[i]);
  }
  for (std::size_t e = 0; e + 1 < hull.size(); ++e)
    out.slopes_.push_back((h[hull[e + 1]] - h[hull[e]]) /
                          (q[hull[e + 1]] - q[hull[e]]));
  return out;
}

namespace {

// Appends one transformed cloud point, skipping quantile duplicates.
struct CloudBuilder {
  std::vector<double> q, h, vv;
  void push(double qq, double hh, double v) {
    if (!q.empty() && qq <= q.back() + 1e-15) return;
    q.push_back(qq);
    h.push_back(hh);
    vv.push_back(v);
  }
};

}  // namespace

SampledVirtual build_oracle(const Prior& prior, double gamma, std::optional<double> s,
                            int grid_size) {
  if (grid_size < 500) throw std::domain_error("monteiro_oracle: grid_size < 500");
  const double b = prior.hi(), a = prior.lo();
  const double window = 10.0 * (b - a) + 12.0;
  const double tol = 1e-3;  // absolute: the equivalence checks are absolute too

  std::vector<double> us;
  us.reserve(static_cast<std::size_t>(grid_size) * 2);
  const std::vector<double> base = linspace(0.0, 1.0, grid_size + 1);
  for (int k = 0; k < grid_size; ++k)
    refine_panel(prior, gamma, s, base[k], base[k + 1], 0, tol, window, us);
  us.push_back(1.0);
  if (s) us.push_back(prior.cdf(*s));
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());

  // Point cloud in (posterior quantile, posterior revenue primitive)
  // coordinates. With an atom, the signal contributes two points: its left
  // limit and the top of the jump.
  CloudBuilder cloud;
  cloud.q.reserve(us.size() + 2);
  cloud.h.reserve(us.size() + 2);
  cloud.vv.reserve(us.size() + 2);
  for (double u : us) {
    const double v = prior.quantile(u);
    if (s && v >= *s) break;
    const double H = prior.revenue_primitive(v);
    if (s) {
      cloud.push(gamma * prior.cdf(v), gamma * H - (1.0 - gamma) * v, v);
    } else {
      cloud.push(prior.cdf(v), H, v);
    }
  }
  if (s) {
    const double Fs = prior.cdf(*s), Hs = prior.revenue_primitive(*s);
    cloud.push(gamma * Fs, gamma * Hs - (1.0 - gamma) * (*s), *s);  // left limit
    cloud.push(gamma * Fs + (1.0 - gamma), gamma * Hs, *s);         // atom top
    for (double u : us) {
      const double v = prior.quantile(u);
      if (v < *s) continue;
      cloud.push(gamma * prior.cdf(v) + (1.0 - gamma), gamma * prior.revenue_primitive(v),
                 v);
    }
  }
  return oracle_from_points(prior, gamma, s, cloud.q, cloud.h, cloud.vv);
}

SampledVirtual oracle_from_tables(const Prior& prior, double gamma, double s,
                                  std::span<const double> u,
                                  std::span<const double> v,
                                  std::span<const double> H) {
  CloudBuilder cloud;
  cloud.q.reserve(u.size() + 2);
  cloud.h.reserve(u.size() + 2);
  cloud.vv.reserve(u.size() + 2);
  std::size_t k = 0;
  for (; k < u.size() && v[k] < s; ++k)
    cloud.push(gamma * u[k], gamma * H[k] - (1.0 - gamma) * v[k], v[k]);
  const double Fs = prior.cdf(s), Hs = prior.revenue_primitive(s);
  cloud.push(gamma * Fs, gamma * Hs - (1.0 - gamma) * s, s);
  cloud.push(gamma * Fs + (1.0 - gamma), gamma * Hs, s);
  for (; k < u.size(); ++k)
    cloud.push(gamma * u[k] + (1.0 - gamma), gamma * H[k], v[k]);
  return oracle_from_points(prior, gamma, s, cloud.q, cloud.h, cloud.vv);
}

double SampledVirtual::operator()(double v) const {
  double q = gamma_ * prior_.cdf(v);
  if (signal_ && v >= *signal_) q += 1.0 - gamma_;
  // edge immediately left of q
  const auto it = std::lower_bound(vertex_q_.begin() + 1, vertex_q_.end(), q);
  std::size_t idx = static_cast<std::size_t>(it - vertex_q_.begin());
  idx = std::clamp<std::size_t>(idx, 1, vertex_q_.size() - 1);
  return slopes_[idx - 1];
}

double SampledVirtual::pseudo_inverse(double z) const {
  if (slopes_.empty())
    throw std::domain_error("pseudo_inverse: empty hull");
  // Competing levels can sit a hair above this hull's top slope when they
  // come from another buyer's discretization; the economic answer there is
  // the top of the support.
  const auto it = std::lower_bound(slopes_.begin(), slopes_.end(), z);
  if (it == slopes_.end()) return vertex_v_.back();
  const std::size_t edge = static_cast<std::size_t>(it - slopes_.begin());
  return vertex_v_[edge];
}

SampledVirtual monteiro_oracle(const HallucinationPosterior& post, int grid_size) {
  return build_oracle(post.prior, post.gamma, post.signal, grid_size);
}

SampledVirtual monteiro_oracle(const Prior& prior, int grid_size) {
  return build_oracle(prior, 1.0, std::nullopt, grid_size);
}

}  // namespace predauct
