#pragma once

#include <optional>

#include "predauct/distributions.hpp"
#include "predauct/rng.hpp"

namespace predauct {

// Posterior belief over a buyer's value after seeing a hallucination-prone
// signal: with probability 1-gamma the value equals the signal exactly, and
// with probability gamma the signal carries no information. The cdf is
// gamma*F(v) below the signal and gamma*F(v) + (1-gamma) at and above it.
struct HallucinationPosterior {
  Prior prior;
  double gamma;   // hallucination probability, in (0, 1)
  double signal;  // observed signal, in [prior.lo(), prior.hi()]

  HallucinationPosterior(Prior p, double gamma_, double signal_);

  double cdf(double v) const;       // right-continuous
  double cdf_left(double v) const;  // left limit; equals gamma*F(v) for v <= signal
  double sample(Rng& rng) const;    // returns the signal w.p. 1-gamma, else a prior draw
};

// Reduction for hallucinations drawn from a different density g than the
// value density f: replacing gamma with this effective rate recovers the
// same posterior form. Arguments are the two densities evaluated at the
// observed signal.
double effective_gamma(double gamma, double value_density_at_signal,
                       double hallucination_density_at_signal);

// Signal models with Gaussian noise. When `gamma` is absent the signal is a
// pure noisy measurement s = v + eps; when present, the signal is noisy with
// probability 1-gamma and an independent prior draw (no added noise)
// otherwise.
struct NoisyPosterior {
  Prior prior;
  double sigma;                 // noise standard deviation, > 0
  std::optional<double> gamma;  // hallucination probability for the hybrid model
  double signal;

  NoisyPosterior(Prior p, double sigma_, std::optional<double> gamma_, double signal_);

  // P(v >= p | signal), by quadrature over the noise kernel.
  double tail(double p) const;

 private:
  double noise_mass_from(double p) const;
  double signal_density() const;
  double noise_total_;  // cached normalizer of the noise branch
};

}  // namespace predauct
