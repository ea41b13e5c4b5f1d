#pragma once

#include "pileup/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pileup {

enum class TargetKind
{
  Gamma33,        //!< Gamma(shape 3, scale 3): x^2 e^{-x/3} / 54
  Exp3,           //!< exponential with mean 3
  Pareto,         //!< (1 + x/4)^{-5}
  Weibull,        //!< Weibull(scale 1/4, shape 3/4)
  UserExponential //!< exponential with a user rate
};

/*!
 * Lifetime densities on (0, inf) used as simulation targets.
 *
 * Sampling goes through the survival quantile so every kind uses a single
 * uniform per draw, except Gamma33 which sums three exponentials.
 */
class TargetDistribution
{
public:
  static TargetDistribution gamma33() { return TargetDistribution(TargetKind::Gamma33, 0.0); }
  static TargetDistribution exp3() { return TargetDistribution(TargetKind::Exp3, 0.0); }
  static TargetDistribution pareto() { return TargetDistribution(TargetKind::Pareto, 0.0); }
  static TargetDistribution weibull() { return TargetDistribution(TargetKind::Weibull, 0.0); }
  static TargetDistribution exponential(double rate);

  //! Parses "gamma", "exp", "pareto", "weibull" or "exp:<rate>".
  static TargetDistribution parse(const std::string& name);

  TargetKind kind() const { return kind_; }
  double rate() const { return rate_; }
  std::string name() const;

  double pdf(double x) const;
  double cdf(double x) const;
  double survival(double x) const;
  //! Inverse CDF, p in [0, 1).
  double quantile(double p) const;
  //! x with survival(x) = s, s in (0, 1].
  double survival_quantile(double s) const;
  double mean() const;

  double draw(RandomStream& rng) const;

private:
  TargetDistribution(TargetKind kind, double rate)
    : kind_(kind)
    , rate_(rate)
  {}

  TargetKind kind_;
  double rate_;
};

//! n i.i.d. draws from dist.
std::vector<double> sample_target(const TargetDistribution& dist, std::size_t n,
                                  std::uint64_t seed);

} // namespace pileup
