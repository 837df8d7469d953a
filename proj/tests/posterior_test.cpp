#include "predauct/posterior.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "predauct/errors.hpp"
#include "predauct/rng.hpp"

namespace predauct {
namespace {

TEST(Posterior, CdfBranches) {
  const HallucinationPosterior post(Prior::uniform(0, 1), 0.75, 0.4);
  EXPECT_NEAR(post.cdf(0.39), 0.2925, 1e-12);
  EXPECT_NEAR(post.cdf(0.4), 0.55, 1e-12);
  EXPECT_NEAR(post.cdf(1.0), 1.0, 1e-12);
  EXPECT_NEAR(post.cdf_left(0.4), 0.3, 1e-12);
}

TEST(Posterior, JumpIsExactlyAtomMass) {
  for (double gamma : {0.3, 0.75, 0.95}) {
    const HallucinationPosterior post(Prior::beta(2, 2), gamma, 0.6);
    EXPECT_DOUBLE_EQ(post.cdf(post.signal) - post.cdf_left(post.signal), 1.0 - gamma);
  }
}

TEST(Posterior, CdfNonDecreasing) {
  const HallucinationPosterior post(Prior::beta(1, 2), 0.6, 0.35);
  double prev = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double v = k / 2000.0;
    const double c = post.cdf(v);
    EXPECT_GE(c, prev - 1e-15);
    prev = c;
  }
}

TEST(Posterior, SampleMatchesCdfByDkw) {
  const HallucinationPosterior post(Prior::uniform(0, 1), 0.75, 0.4);
  Rng rng(99);
  const int n = 200000;
  std::vector<double> xs(n);
  for (double& x : xs) x = post.sample(rng);
  std::sort(xs.begin(), xs.end());
  // DKW 99% band: eps = sqrt(ln(2/alpha) / (2n))
  const double eps = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
  for (int k = 1; k < 100; ++k) {
    const double v = k / 100.0;
    const double ecdf =
        std::lower_bound(xs.begin(), xs.end(), v) - xs.begin();  // F_n(v-)
    EXPECT_NEAR(ecdf / n, post.cdf_left(v), eps) << v;
  }
}

TEST(Posterior, SampleMeanExample) {
  const HallucinationPosterior post(Prior::uniform(0, 1), 0.5, 0.9);
  Rng rng(7);
  const int n = 100000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += post.sample(rng);
  mean /= n;
  // E = 0.5 * 0.5 + 0.5 * 0.9
  EXPECT_NEAR(mean, 0.7, 3.0 * 0.3 / std::sqrt(n));
}

TEST(Posterior, TinyGammaReturnsSignal) {
  const HallucinationPosterior post(Prior::uniform(0, 1), 1e-9, 0.37);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) EXPECT_DOUBLE_EQ(post.sample(rng), 0.37);
}

TEST(EffectiveGamma, IdenticalDensitiesAreNeutral) {
  for (double g : {0.1, 0.5, 0.9})
    for (double c : {0.2, 1.0, 7.0}) EXPECT_NEAR(effective_gamma(g, c, c), g, 1e-15);
}

TEST(EffectiveGamma, WorkedExample) {
  EXPECT_NEAR(effective_gamma(0.5, 1.0, 3.0), 0.75, 1e-15);
}

TEST(EffectiveGamma, MonotoneInHallucinationDensity) {
  double prev = 0.0;
  for (double g2 : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double eg = effective_gamma(0.4, 1.0, g2);
    EXPECT_GT(eg, prev);
    prev = eg;
  }
}

TEST(EffectiveGamma, Errors) {
  EXPECT_THROW(effective_gamma(1.5, 1, 1), std::domain_error);
  EXPECT_THROW(effective_gamma(0.5, 0, 0), DegenerateSignalError);
}

TEST(NoisyPosterior, DensityNormalizes) {
  const NoisyPosterior pure(Prior::beta(1, 2), 0.1, std::nullopt, 0.5);
  EXPECT_NEAR(pure.tail(pure.prior.lo()), 1.0, 1e-6);
  const NoisyPosterior hybrid(Prior::beta(1, 2), 0.1, 0.77, 0.5);
  EXPECT_NEAR(hybrid.tail(hybrid.prior.lo()), 1.0, 1e-6);
}

TEST(NoisyPosterior, HugeNoiseRecoversPrior) {
  const Prior prior = Prior::uniform(0, 1);
  const NoisyPosterior post(prior, 1e3, std::nullopt, 0.8);
  for (double p : {0.2, 0.5, 0.9})
    EXPECT_NEAR(post.tail(p), 1.0 - prior.cdf(p), 1e-3) << p;
}

TEST(NoisyPosterior, AlwaysHallucinateRecoversPrior) {
  const Prior prior = Prior::beta(2, 2);
  const NoisyPosterior post(prior, 0.05, 1.0 - 1e-12, 0.9);
  for (double p : {0.2, 0.5, 0.9})
    EXPECT_NEAR(post.tail(p), 1.0 - prior.cdf(p), 1e-6) << p;
}

TEST(NoisyPosterior, SymmetricKernelOnFlatPrior) {
  const NoisyPosterior post(Prior::uniform(0, 1), 0.1, std::nullopt, 0.5);
  EXPECT_NEAR(post.tail(0.5), 0.5, 1e-9);
}

TEST(NoisyPosterior, HybridIsConvexCombination) {
  const Prior prior = Prior::beta(1, 2);
  const double sigma = 0.1, gamma = 0.6, s = 0.45;
  const NoisyPosterior pure(prior, sigma, std::nullopt, s);
  const NoisyPosterior hybrid(prior, sigma, gamma, s);
  // tail_hybrid = w * tail_noise + (1-w) * prior tail, with one weight w for
  // every price: infer w at one point, then check it fits everywhere
  auto weight_at = [&](double p) {
    const double th = hybrid.tail(p), tp = pure.tail(p), tf = 1.0 - prior.cdf(p);
    return (th - tf) / (tp - tf);
  };
  const double w = weight_at(0.3);
  EXPECT_GT(w, 0.0);
  EXPECT_LT(w, 1.0);
  for (double p : {0.15, 0.4, 0.55, 0.7}) {
    const double lhs = hybrid.tail(p);
    const double rhs = w * pure.tail(p) + (1.0 - w) * (1.0 - prior.cdf(p));
    EXPECT_NEAR(lhs, rhs, 1e-8) << p;
  }
}

TEST(NoisyPosterior, DegenerateSignal) {
  EXPECT_THROW(NoisyPosterior(Prior::uniform(0, 1), 1e-4, std::nullopt, -500.0),
               DegenerateSignalError);
}

}  // namespace
}  // namespace predauct
