#include "predauct/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "predauct/errors.hpp"
#include "predauct/numeric.hpp"

namespace predauct {

HallucinationPosterior::HallucinationPosterior(Prior p, double gamma_, double signal_)
    : prior(std::move(p)), gamma(gamma_), signal(signal_) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("HallucinationPosterior: gamma outside (0,1)");
  if (signal < prior.lo() || signal > prior.hi())
    throw std::domain_error("HallucinationPosterior: signal outside support");
}

double HallucinationPosterior::cdf(double v) const {
  const double base = gamma * prior.cdf(v);
  return v >= signal ? base + (1.0 - gamma) : base;
}

double HallucinationPosterior::cdf_left(double v) const {
  const double base = gamma * prior.cdf(v);
  return v > signal ? base + (1.0 - gamma) : base;
}

double HallucinationPosterior::sample(Rng& rng) const {
  if (rng.uniform01() < 1.0 - gamma) return signal;
  return prior.sample(rng);
}

double effective_gamma(double gamma, double value_density_at_signal,
                       double hallucination_density_at_signal) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("effective_gamma: gamma outside (0,1)");
  if (value_density_at_signal < 0.0 || hallucination_density_at_signal < 0.0)
    throw std::domain_error("effective_gamma: negative density");
  if (value_density_at_signal == 0.0 && hallucination_density_at_signal == 0.0)
    throw DegenerateSignalError("effective_gamma: both densities vanish at the signal");
  if (hallucination_density_at_signal == 0.0) return 0.0;
  const double ratio = value_density_at_signal / hallucination_density_at_signal;
  return 1.0 / (1.0 + (1.0 - gamma) / gamma * ratio);
}

namespace {
constexpr int kNoiseNodes = 4001;
constexpr double kKernelRange = 8.0;  // [s - 8 sigma, s + 8 sigma] carries all but <1e-15
}  // namespace

NoisyPosterior::NoisyPosterior(Prior p, double sigma_, std::optional<double> gamma_,
                               double signal_)
    : prior(std::move(p)), sigma(sigma_), gamma(gamma_), signal(signal_) {
  if (!(sigma > 0.0)) throw std::domain_error("NoisyPosterior: sigma must be > 0");
  if (gamma && !(*gamma > 0.0 && *gamma < 1.0))
    throw std::domain_error("NoisyPosterior: gamma outside (0,1)");
  noise_total_ = noise_mass_from(prior.lo());
  const double hall_mass = gamma ? *gamma * signal_density() : 0.0;
  if ((gamma ? (1.0 - *gamma) * noise_total_ + hall_mass : noise_total_) < 1e-300)
    throw DegenerateSignalError("NoisyPosterior: signal incompatible with the support");
}

// Density of the hallucination branch at the signal; zero when the signal
// falls outside the support (such a signal can only come from the noise
// branch).
double NoisyPosterior::signal_density() const {
  if (signal < prior.lo() || signal > prior.hi()) return 0.0;
  return prior.pdf(signal);
}

double NoisyPosterior::noise_mass_from(double p) const {
  const double lo = std::max({prior.lo(), signal - kKernelRange * sigma, p});
  const double hi = std::min(prior.hi(), signal + kKernelRange * sigma);
  if (hi <= lo) return 0.0;
  const double inv = 1.0 / sigma;
  auto integrand = [&](double v) {
    const double z = (signal - v) * inv;
    return prior.pdf(v) * 0.39894228040143267794 * std::exp(-0.5 * z * z) * inv;
  };
  return simpson(integrand, lo, hi, kNoiseNodes);
}

double NoisyPosterior::tail(double p) const {
  if (p < prior.lo() || p > prior.hi())
    throw std::domain_error("tail: price outside support");
  const double noise_tail_mass = noise_mass_from(p);
  if (!gamma) {
    if (noise_total_ < 1e-300)
      throw DegenerateSignalError("NoisyPosterior: vanishing normalizer");
    return std::clamp(noise_tail_mass / noise_total_, 0.0, 1.0);
  }
  const double g = *gamma;
  const double f_s = signal_density();
  const double num = (1.0 - g) * noise_tail_mass + g * f_s * (1.0 - prior.cdf(p));
  const double den = (1.0 - g) * noise_total_ + g * f_s;
  if (den < 1e-300)
    throw DegenerateSignalError("NoisyPosterior: vanishing normalizer");
  return std::clamp(num / den, 0.0, 1.0);
}

}  // namespace predauct
