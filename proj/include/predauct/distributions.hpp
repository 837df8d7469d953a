#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "predauct/rng.hpp"

namespace predauct {

namespace detail {
class Dist;
}

// Value distribution on a compact support [lo, hi] with strictly positive
// density on the interior. Families with unbounded support (exponential,
// lognormal) are truncated at the 1-1e-6 quantile and renormalized at
// construction. Copies are cheap handles; all methods are const and
// thread-safe after construction.
class Prior {
 public:
  double lo() const;
  double hi() const;

  double cdf(double v) const;       // throws std::domain_error outside [lo, hi]
  double pdf(double v) const;
  double quantile(double q) const;  // throws std::domain_error outside [0, 1]
  double sample(Rng& rng) const;    // inverse transform via quantile

  // phi_F(v) = v - (1 - F(v)) / f(v). Where the density vanishes at an
  // endpoint this returns v when F(v) = 1 and a large negative sentinel
  // otherwise.
  double virtual_value(double v) const;

  // phi_{gamma F}(v) = v - (1/gamma - F(v)) / f(v), the pre-ironing virtual
  // value of the gamma-scaled prior. Requires gamma in (0, 1].
  double scaled_virtual_value(double gamma, double v) const;

  // H_F(x) = int_a^x t dF - int_a^x (1 - F) dt - a, evaluated in closed form
  // as -x * (1 - F(x)) (integration by parts; F(a) = 0).
  double revenue_primitive(double x) const;

  // Same quantity by composite-trapezoid quadrature of the defining
  // integrals; node count configurable.
  double revenue_primitive_quad(double x, int nodes = 4001) const;

  // True iff the virtual value is non-decreasing on a uniform grid of
  // `grid_size` interior points, with slack for floating-point noise.
  bool is_regular(int grid_size = 1000, double slack = 1e-9) const;

  std::string token() const;

  // Parses tokens like "uniform:0,1", "beta:1,2", "exponential:1",
  // "lognormal:0,1.8", "truncnormal:0.1,0.04,0.5,0.52", and mixtures
  // "mix:0.75*beta:4,6+0.25*beta:4,1". Throws PriorParseError.
  static Prior parse(std::string_view token);

  static Prior uniform(double a, double b);
  static Prior beta(double alpha, double beta);
  static Prior exponential(double lambda);
  static Prior lognormal(double mu, double sigma);
  static Prior truncated_normal(double mu, double sigma, double a, double b);
  static Prior mixture(std::vector<double> weights, std::vector<Prior> components);

 private:
  explicit Prior(std::shared_ptr<const detail::Dist> impl);
  std::shared_ptr<const detail::Dist> impl_;
  double lo_ = 0.0, hi_ = 0.0;
};

}  // namespace predauct
