#include "pileup/targets.hpp"

#include "pileup/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <cmath>

namespace pileup {

TargetDistribution TargetDistribution::exponential(double rate)
{
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("exponential target rate must be positive");
  }
  return TargetDistribution(TargetKind::UserExponential, rate);
}

TargetDistribution TargetDistribution::parse(const std::string& name)
{
  if (name == "gamma" || name == "gamma33") {
    return gamma33();
  }
  if (name == "exp" || name == "exp3" || name == "exponential") {
    return exp3();
  }
  if (name == "pareto") {
    return pareto();
  }
  if (name == "weibull") {
    return weibull();
  }
  if (name.rfind("exp:", 0) == 0) {
    double rate = 0.0;
    const char* first = name.data() + 4;
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, rate);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError("bad exponential rate in target '" + name + "'");
    }
    return exponential(rate);
  }
  throw ConfigError("unknown target distribution '" + name + "'");
}

std::string TargetDistribution::name() const
{
  switch (kind_) {
    case TargetKind::Gamma33: return "gamma";
    case TargetKind::Exp3: return "exp";
    case TargetKind::Pareto: return "pareto";
    case TargetKind::Weibull: return "weibull";
    case TargetKind::UserExponential: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, rate_);
      return "exp:" + std::string(buf, ptr);
    }
  }
  return "unknown";
}

double TargetDistribution::pdf(double x) const
{
  if (!(x >= 0.0)) {
    return 0.0;
  }
  switch (kind_) {
    case TargetKind::Gamma33: return x * x * std::exp(-x / 3.0) / 54.0;
    case TargetKind::Exp3: return std::exp(-x / 3.0) / 3.0;
    case TargetKind::Pareto: return std::pow(1.0 + x / 4.0, -5.0);
    case TargetKind::Weibull:
      // (3/4) (1/4)^{-3/4} x^{-1/4} exp(-(4x)^{3/4}); unbounded at 0.
      return 0.75 * std::pow(4.0, 0.75) * std::pow(x, -0.25) * std::exp(-std::pow(4.0 * x, 0.75));
    case TargetKind::UserExponential: return rate_ * std::exp(-rate_ * x);
  }
  return 0.0;
}

double TargetDistribution::survival(double x) const
{
  if (!(x > 0.0)) {
    return 1.0;
  }
  switch (kind_) {
    case TargetKind::Gamma33: {
      const double y = x / 3.0;
      return std::exp(-y) * (1.0 + y + 0.5 * y * y);
    }
    case TargetKind::Exp3: return std::exp(-x / 3.0);
    case TargetKind::Pareto: return std::pow(1.0 + x / 4.0, -4.0);
    case TargetKind::Weibull: return std::exp(-std::pow(4.0 * x, 0.75));
    case TargetKind::UserExponential: return std::exp(-rate_ * x);
  }
  return 1.0;
}

double TargetDistribution::cdf(double x) const
{
  if (!(x > 0.0)) {
    return 0.0;
  }
  switch (kind_) {
    case TargetKind::Gamma33: return boost::math::gamma_p(3.0, x / 3.0);
    case TargetKind::Exp3: return -std::expm1(-x / 3.0);
    case TargetKind::Pareto: return -std::expm1(-4.0 * std::log1p(x / 4.0));
    case TargetKind::Weibull: return -std::expm1(-std::pow(4.0 * x, 0.75));
    case TargetKind::UserExponential: return -std::expm1(-rate_ * x);
  }
  return 0.0;
}

double TargetDistribution::survival_quantile(double s) const
{
  if (!(s > 0.0 && s <= 1.0)) {
    throw DomainError("survival level must lie in (0, 1]");
  }
  switch (kind_) {
    case TargetKind::Gamma33: return 3.0 * boost::math::gamma_q_inv(3.0, s);
    case TargetKind::Exp3: return -3.0 * std::log(s);
    case TargetKind::Pareto: return 4.0 * (std::pow(s, -0.25) - 1.0);
    case TargetKind::Weibull: return 0.25 * std::pow(-std::log(s), 4.0 / 3.0);
    case TargetKind::UserExponential: return -std::log(s) / rate_;
  }
  return 0.0;
}

double TargetDistribution::quantile(double p) const
{
  if (!(p >= 0.0 && p < 1.0)) {
    throw DomainError("quantile level must lie in [0, 1)");
  }
  switch (kind_) {
    case TargetKind::Gamma33: return 3.0 * boost::math::gamma_p_inv(3.0, p);
    case TargetKind::Exp3: return -3.0 * std::log1p(-p);
    case TargetKind::Pareto: return 4.0 * std::expm1(-0.25 * std::log1p(-p));
    case TargetKind::Weibull: return 0.25 * std::pow(-std::log1p(-p), 4.0 / 3.0);
    case TargetKind::UserExponential: return -std::log1p(-p) / rate_;
  }
  return 0.0;
}

double TargetDistribution::mean() const
{
  switch (kind_) {
    case TargetKind::Gamma33: return 9.0;
    case TargetKind::Exp3: return 3.0;
    case TargetKind::Pareto: return 4.0 / 3.0;
    case TargetKind::Weibull: return 0.25 * std::tgamma(1.0 + 4.0 / 3.0);
    case TargetKind::UserExponential: return 1.0 / rate_;
  }
  return 0.0;
}

double TargetDistribution::draw(RandomStream& rng) const
{
  if (kind_ == TargetKind::Gamma33) {
    return -3.0 * (std::log(rng.uniform_open()) + std::log(rng.uniform_open()) +
                   std::log(rng.uniform_open()));
  }
  return survival_quantile(rng.uniform_open());
}

std::vector<double> sample_target(const TargetDistribution& dist, std::size_t n,
                                  std::uint64_t seed)
{
  if (n == 0) {
    throw DomainError("sample size must be at least 1");
  }
  RandomStream rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) {
    x = dist.draw(rng);
  }
  return out;
}

} // namespace pileup
