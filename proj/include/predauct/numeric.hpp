#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace predauct {

inline constexpr double kNegHuge = -1e300;

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

// Composite trapezoid with `nodes` equally spaced points (nodes >= 2).
template <class F>
double trapezoid(F&& f, double lo, double hi, int nodes) {
  if (hi <= lo) return 0.0;
  const double h = (hi - lo) / (nodes - 1);
  double acc = 0.5 * (f(lo) + f(hi));
  for (int k = 1; k < nodes - 1; ++k) acc += f(lo + k * h);
  return acc * h;
}

// Composite Simpson; `nodes` is rounded up to the next odd count >= 3.
template <class F>
double simpson(F&& f, double lo, double hi, int nodes) {
  if (hi <= lo) return 0.0;
  if (nodes < 3) nodes = 3;
  if (nodes % 2 == 0) ++nodes;
  const int panels = (nodes - 1) / 2;
  const double h = (hi - lo) / (nodes - 1);
  double acc = f(lo) + f(hi);
  for (int p = 0; p < panels; ++p) {
    acc += 4.0 * f(lo + (2 * p + 1) * h);
    if (p > 0) acc += 2.0 * f(lo + 2 * p * h);
  }
  return acc * h / 3.0;
}

// 3-point Gauss-Legendre on [lo, hi]; exact for quintics.
template <class F>
double gauss3(F&& f, double lo, double hi) {
  const double m = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  constexpr double x = 0.7745966692414834;  // sqrt(3/5)
  return h * (5.0 * f(m - h * x) + 8.0 * f(m) + 5.0 * f(m + h * x)) / 9.0;
}

// Bisection for the root of a function with f(lo), f(hi) of opposite sign
// (or zero). Keeps the invariant sign(f(lo)) fixed. Returns the midpoint of
// the final bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Lower convex hull (monotone chain) of points (x_k, y_k) with x strictly
// increasing. Returns indices of hull vertices, first and last included.
std::vector<std::size_t> lower_hull_indices(const std::vector<double>& x,
                                            const std::vector<double>& y);

}  // namespace predauct
