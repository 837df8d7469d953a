#include "predauct/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include "predauct/errors.hpp"
#include "predauct/numeric.hpp"

namespace predauct {
namespace detail {

namespace {

constexpr double kTailMass = 1e-6;  // unbounded supports cut at the 1-1e-6 quantile

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

// P(lo_z < Z <= hi_z) for a standard normal, stable far in either tail.
double norm_mass(double lo_z, double hi_z) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  if (lo_z >= 0.0)  // both in the right tail: difference of erfc terms
    return 0.5 * (std::erfc(lo_z * inv_sqrt2) - std::erfc(hi_z * inv_sqrt2));
  if (hi_z <= 0.0)
    return 0.5 * (std::erfc(-hi_z * inv_sqrt2) - std::erfc(-lo_z * inv_sqrt2));
  return norm_cdf(hi_z) - norm_cdf(lo_z);
}

double norm_pdf(double z) {
  return 0.39894228040143267794 * std::exp(-0.5 * z * z);
}

}  // namespace

class Dist {
 public:
  virtual ~Dist() = default;
  virtual double lo() const = 0;
  virtual double hi() const = 0;
  virtual double cdf(double v) const = 0;       // normalized; cdf(lo)=0, cdf(hi)=1
  virtual double pdf(double v) const = 0;
  virtual double quantile(double q) const = 0;  // inverse of cdf on [0,1]
  virtual std::string token() const = 0;
};

namespace {

class UniformDist final : public Dist {
 public:
  UniformDist(double a, double b) : a_(a), b_(b) {
    if (!(b > a)) throw std::domain_error("uniform: requires b > a");
  }
  double lo() const override { return a_; }
  double hi() const override { return b_; }
  double cdf(double v) const override { return (v - a_) / (b_ - a_); }
  double pdf(double) const override { return 1.0 / (b_ - a_); }
  double quantile(double q) const override { return a_ + q * (b_ - a_); }
  std::string token() const override { return "uniform:" + fmt(a_) + "," + fmt(b_); }

 private:
  double a_, b_;
};

class BetaDist final : public Dist {
 public:
  BetaDist(double alpha, double beta) : d_(alpha, beta), alpha_(alpha), beta_(beta) {}
  double lo() const override { return 0.0; }
  double hi() const override { return 1.0; }
  double cdf(double v) const override { return boost::math::cdf(d_, v); }
  double pdf(double v) const override { return boost::math::pdf(d_, v); }
  double quantile(double q) const override {
    if (q <= 0.0) return 0.0;
    if (q >= 1.0) return 1.0;
    return boost::math::quantile(d_, q);
  }
  std::string token() const override { return "beta:" + fmt(alpha_) + "," + fmt(beta_); }

 private:
  boost::math::beta_distribution<double> d_;
  double alpha_, beta_;
};

class ExponentialDist final : public Dist {
 public:
  explicit ExponentialDist(double lambda) : lambda_(lambda) {
    if (!(lambda > 0)) throw std::domain_error("exponential: requires lambda > 0");
    norm_ = 1.0 - kTailMass;
    b_ = -std::log(kTailMass) / lambda_;
  }
  double lo() const override { return 0.0; }
  double hi() const override { return b_; }
  double cdf(double v) const override { return -std::expm1(-lambda_ * v) / norm_; }
  double pdf(double v) const override { return lambda_ * std::exp(-lambda_ * v) / norm_; }
  double quantile(double q) const override { return -std::log1p(-q * norm_) / lambda_; }
  std::string token() const override { return "exponential:" + fmt(lambda_); }

 private:
  double lambda_, b_, norm_;
};

class LognormalDist final : public Dist {
 public:
  LognormalDist(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!(sigma > 0)) throw std::domain_error("lognormal: requires sigma > 0");
    norm_ = 1.0 - kTailMass;
    boost::math::normal_distribution<double> n;
    b_ = std::exp(mu_ + sigma_ * boost::math::quantile(n, norm_));
  }
  double lo() const override { return 0.0; }
  double hi() const override { return b_; }
  double cdf(double v) const override {
    if (v <= 0.0) return 0.0;
    return norm_cdf((std::log(v) - mu_) / sigma_) / norm_;
  }
  double pdf(double v) const override {
    if (v <= 0.0) return 0.0;
    const double z = (std::log(v) - mu_) / sigma_;
    return norm_pdf(z) / (sigma_ * v * norm_);
  }
  double quantile(double q) const override {
    if (q <= 0.0) return 0.0;
    boost::math::normal_distribution<double> n;
    return std::exp(mu_ + sigma_ * boost::math::quantile(n, std::min(q * norm_, norm_)));
  }
  std::string token() const override { return "lognormal:" + fmt(mu_) + "," + fmt(sigma_); }

 private:
  double mu_, sigma_, b_, norm_;
};

class TruncatedNormalDist final : public Dist {
 public:
  TruncatedNormalDist(double mu, double sigma, double a, double b)
      : mu_(mu), sigma_(sigma), a_(a), b_(b) {
    if (!(sigma > 0)) throw std::domain_error("truncnormal: requires sigma > 0");
    if (!(b > a)) throw std::domain_error("truncnormal: requires b > a");
    za_ = (a_ - mu_) / sigma_;
    zb_ = (b_ - mu_) / sigma_;
    mass_ = norm_mass(za_, zb_);
    if (!(mass_ > 0))
      throw std::domain_error("truncnormal: truncation window carries no mass");
  }
  double lo() const override { return a_; }
  double hi() const override { return b_; }
  double cdf(double v) const override {
    if (v <= a_) return 0.0;
    if (v >= b_) return 1.0;
    return norm_mass(za_, (v - mu_) / sigma_) / mass_;
  }
  double pdf(double v) const override {
    if (v < a_ || v > b_) return 0.0;
    return norm_pdf((v - mu_) / sigma_) / (sigma_ * mass_);
  }
  double quantile(double q) const override {
    // Bisection on the cdf; immune to cancellation under extreme truncation.
    if (q <= 0.0) return a_;
    if (q >= 1.0) return b_;
    double lo = a_, hi = b_;
    for (int i = 0; i < 90; ++i) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  std::string token() const override {
    return "truncnormal:" + fmt(mu_) + "," + fmt(sigma_) + "," + fmt(a_) + "," + fmt(b_);
  }

 private:
  double mu_, sigma_, a_, b_, za_, zb_, mass_;
};

class MixtureDist final : public Dist {
 public:
  MixtureDist(std::vector<double> weights, std::vector<Prior> comps)
      : weights_(std::move(weights)), comps_(std::move(comps)) {
    if (weights_.empty() || weights_.size() != comps_.size())
      throw std::domain_error("mixture: weights/components size mismatch");
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w > 0)) throw std::domain_error("mixture: weights must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::domain_error("mixture: weights must sum to 1");
    for (double& w : weights_) w /= sum;
    lo_ = comps_[0].lo();
    hi_ = comps_[0].hi();
    for (const auto& c : comps_) {
      lo_ = std::min(lo_, c.lo());
      hi_ = std::max(hi_, c.hi());
    }
  }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  double cdf(double v) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const auto& c = comps_[i];
      double u = v <= c.lo() ? 0.0 : (v >= c.hi() ? 1.0 : c.cdf(v));
      acc += weights_[i] * u;
    }
    return acc;
  }
  double pdf(double v) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const auto& c = comps_[i];
      if (v >= c.lo() && v <= c.hi()) acc += weights_[i] * c.pdf(v);
    }
    return acc;
  }
  double quantile(double q) const override {
    if (q <= 0.0) return lo_;
    if (q >= 1.0) return hi_;
    double lo = lo_, hi = hi_;
    for (int i = 0; i < 90; ++i) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  std::string token() const override {
    std::ostringstream out;
    out << "mix:";
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      if (i) out << "+";
      out << fmt(weights_[i]) << "*" << comps_[i].token();
    }
    return out.str();
  }

 private:
  std::vector<double> weights_;
  std::vector<Prior> comps_;
  double lo_, hi_;
};

}  // namespace
}  // namespace detail

Prior::Prior(std::shared_ptr<const detail::Dist> impl) : impl_(std::move(impl)) {
  lo_ = impl_->lo();
  hi_ = impl_->hi();
}

double Prior::lo() const { return lo_; }
double Prior::hi() const { return hi_; }

double Prior::cdf(double v) const {
  if (v < lo_ - 1e-12 || v > hi_ + 1e-12)
    throw std::domain_error("cdf: value outside support");
  return std::clamp(impl_->cdf(std::clamp(v, lo_, hi_)), 0.0, 1.0);
}

double Prior::pdf(double v) const {
  if (v < lo_ - 1e-12 || v > hi_ + 1e-12)
    throw std::domain_error("pdf: value outside support");
  return impl_->pdf(std::clamp(v, lo_, hi_));
}

double Prior::quantile(double q) const {
  if (q < -1e-15 || q > 1.0 + 1e-15)
    throw std::domain_error("quantile: probability outside [0,1]");
  return std::clamp(impl_->quantile(std::clamp(q, 0.0, 1.0)), lo_, hi_);
}

double Prior::sample(Rng& rng) const { return quantile(rng.uniform01()); }

double Prior::virtual_value(double v) const {
  const double F = cdf(v);
  if (1.0 - F <= 0.0) return v;
  const double f = pdf(v);
  if (f <= 0.0) return kNegHuge;
  return v - (1.0 - F) / f;
}

double Prior::scaled_virtual_value(double gamma, double v) const {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::domain_error("scaled_virtual_value: gamma outside (0,1]");
  const double F = cdf(v);
  const double num = 1.0 / gamma - F;
  if (num <= 0.0) return v;  // only possible at gamma = 1, F = 1
  const double f = pdf(v);
  if (f <= 0.0) return kNegHuge;
  return v - num / f;
}

double Prior::revenue_primitive(double x) const { return -x * (1.0 - cdf(x)); }

double Prior::revenue_primitive_quad(double x, int nodes) const {
  if (x < lo_ - 1e-12 || x > hi_ + 1e-12)
    throw std::domain_error("revenue_primitive_quad: value outside support");
  if (nodes < 2) nodes = 2;
  const double value =
      trapezoid([&](double t) { return t * pdf(t) - (1.0 - cdf(t)); }, lo_, x, nodes);
  return value - lo_;
}

bool Prior::is_regular(int grid_size, double slack) const {
  if (grid_size < 2) throw std::domain_error("is_regular: grid_size must be >= 2");
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_size; ++k) {
    const double v =
        lo_ + (hi_ - lo_) * (k + 1) / static_cast<double>(grid_size + 1);
    const double phi = virtual_value(v);
    if (phi < prev - slack) return false;
    prev = std::max(prev, phi);
  }
  return true;
}

std::string Prior::token() const { return impl_->token(); }

Prior Prior::uniform(double a, double b) {
  return Prior(std::make_shared<detail::UniformDist>(a, b));
}
Prior Prior::beta(double alpha, double beta) {
  return Prior(std::make_shared<detail::BetaDist>(alpha, beta));
}
Prior Prior::exponential(double lambda) {
  return Prior(std::make_shared<detail::ExponentialDist>(lambda));
}
Prior Prior::lognormal(double mu, double sigma) {
  return Prior(std::make_shared<detail::LognormalDist>(mu, sigma));
}
Prior Prior::truncated_normal(double mu, double sigma, double a, double b) {
  return Prior(std::make_shared<detail::TruncatedNormalDist>(mu, sigma, a, b));
}
Prior Prior::mixture(std::vector<double> weights, std::vector<Prior> components) {
  return Prior(std::make_shared<detail::MixtureDist>(std::move(weights),
                                                     std::move(components)));
}

namespace {

struct TokenCursor {
  std::string_view text;
  std::size_t base;  // offset of `text` within the original token
};

double parse_number(std::string_view s, std::size_t base, std::size_t& pos) {
  std::size_t end = pos;
  while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) ||
                            s[end] == '.' || s[end] == '-' || s[end] == '+' ||
                            s[end] == 'e' || s[end] == 'E')) {
    // '+'/'-' only valid leading or after an exponent marker
    if ((s[end] == '+' || s[end] == '-') && end != pos &&
        !(s[end - 1] == 'e' || s[end - 1] == 'E'))
      break;
    ++end;
  }
  if (end == pos) throw PriorParseError("expected a number", base + pos);
  double out;
  try {
    std::size_t used = 0;
    out = std::stod(std::string(s.substr(pos, end - pos)), &used);
    if (used != end - pos) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw PriorParseError("malformed number", base + pos);
  }
  pos = end;
  return out;
}

Prior parse_single(TokenCursor cur) {
  const std::string_view s = cur.text;
  const std::size_t colon = s.find(':');
  if (colon == std::string_view::npos)
    throw PriorParseError("expected 'family:params'", cur.base);
  const std::string_view family = s.substr(0, colon);
  std::vector<double> params;
  std::size_t pos = colon + 1;
  while (pos < s.size()) {
    params.push_back(parse_number(s, cur.base, pos));
    if (pos < s.size()) {
      if (s[pos] != ',') throw PriorParseError("expected ','", cur.base + pos);
      ++pos;
      if (pos == s.size()) throw PriorParseError("trailing ','", cur.base + pos);
    }
  }
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw PriorParseError("wrong parameter count for '" + std::string(family) + "'",
                            cur.base + colon);
  };
  try {
    if (family == "uniform") {
      need(2);
      return Prior::uniform(params[0], params[1]);
    }
    if (family == "beta") {
      need(2);
      return Prior::beta(params[0], params[1]);
    }
    if (family == "exponential") {
      need(1);
      return Prior::exponential(params[0]);
    }
    if (family == "lognormal") {
      need(2);
      return Prior::lognormal(params[0], params[1]);
    }
    if (family == "truncnormal") {
      need(4);
      return Prior::truncated_normal(params[0], params[1], params[2], params[3]);
    }
  } catch (const std::domain_error& e) {
    throw PriorParseError(e.what(), cur.base);
  }
  throw PriorParseError("unknown family '" + std::string(family) + "'", cur.base);
}

}  // namespace

Prior Prior::parse(std::string_view token) {
  if (token.empty()) throw PriorParseError("empty prior token", 0);
  if (token.substr(0, 4) != "mix:") return parse_single({token, 0});

  std::string_view body = token.substr(4);
  std::vector<double> weights;
  std::vector<Prior> comps;
  std::size_t start = 0;
  while (start <= body.size()) {
    // find the next top-level '+': one not directly after an exponent marker
    std::size_t plus = std::string_view::npos;
    for (std::size_t i = start; i < body.size(); ++i) {
      if (body[i] == '+' && i > start && body[i - 1] != 'e' && body[i - 1] != 'E') {
        plus = i;
        break;
      }
    }
    const std::string_view term =
        body.substr(start, (plus == std::string_view::npos ? body.size() : plus) - start);
    const std::size_t term_base = 4 + start;
    const std::size_t star = term.find('*');
    if (star == std::string_view::npos)
      throw PriorParseError("expected 'weight*family:params'", term_base);
    std::size_t wpos = 0;
    weights.push_back(parse_number(term.substr(0, star), term_base, wpos));
    if (wpos != star) throw PriorParseError("malformed weight", term_base + wpos);
    comps.push_back(parse_single({term.substr(star + 1), term_base + star + 1}));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  try {
    return Prior::mixture(std::move(weights), std::move(comps));
  } catch (const std::domain_error& e) {
    throw PriorParseError(e.what(), 0);
  }
}

}  // namespace predauct
