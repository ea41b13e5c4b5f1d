#include "pileup/trig_estimator.hpp"

#include "pileup/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pileup {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const double sqrt2 = std::sqrt(2.0);

void validate_interval(const Interval& interval)
{
  if (!(interval.hi > interval.lo) || !std::isfinite(interval.lo) ||
      !std::isfinite(interval.hi)) {
    throw DomainError("estimation interval needs lo < hi");
  }
}

} // namespace

std::vector<double> trig_basis(int m, double x)
{
  if (m < 0) {
    throw DomainError("trig_basis requires m >= 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("trig_basis argument outside [0, 1]");
  }
  std::vector<double> phi(2 * std::size_t(m) + 1);
  phi[0] = 1.0;
  for (int j = 1; j <= m; ++j) {
    phi[2 * j - 1] = sqrt2 * std::cos(two_pi * j * x);
    phi[2 * j] = sqrt2 * std::sin(two_pi * j * x);
  }
  return phi;
}

TrigFit fit_trig_coefficients(const Sample& sample, const Interval& interval, int m)
{
  if (sample.empty()) {
    throw DomainError("empty sample");
  }
  if (m < 0) {
    throw DomainError("fit_trig_coefficients requires m >= 0");
  }
  validate_interval(interval);

  TrigFit fit;
  fit.coeffs.assign(2 * std::size_t(m) + 1, 0.0);
  const auto values = sample.values();
  const auto weights = sample.weights();
  const double inv_len = 1.0 / interval.length();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!interval.contains(values[i])) {
      ++fit.dropped;
      continue;
    }
    const double x = std::clamp((values[i] - interval.lo) * inv_len, 0.0, 1.0);
    const double w = weights[i];
    fit.coeffs[0] += w;
    for (int j = 1; j <= m; ++j) {
      const double arg = two_pi * j * x;
      fit.coeffs[2 * j - 1] += w * std::cos(arg);
      fit.coeffs[2 * j] += w * std::sin(arg);
    }
  }
  const double inv_n = 1.0 / double(values.size());
  fit.coeffs[0] *= inv_n;
  for (std::size_t k = 1; k < fit.coeffs.size(); ++k) {
    fit.coeffs[k] *= sqrt2 * inv_n;
  }
  return fit;
}

double trig_contrast(std::span<const double> coeffs)
{
  double s = 0.0;
  for (double a : coeffs) {
    s += a * a;
  }
  return -s;
}

Interval default_trig_interval(const Sample& sample)
{
  if (sample.empty()) {
    throw DomainError("empty sample");
  }
  const double n = double(sample.size());
  return {0.0, sample.max() * (1.0 + 1.0 / n)};
}

int max_trig_frequency(std::size_t n)
{
  return std::max(0, int(n / 2) - 1);
}

TrigSelection select_trig_model_path(const Sample& sample, std::optional<Interval> interval,
                                     double kappa, double W)
{
  if (sample.empty()) {
    throw DomainError("empty sample");
  }
  if (!(kappa > 0.0) || !(W > 0.0)) {
    throw ConfigError("kappa and W must be positive");
  }
  const Interval A = interval.value_or(default_trig_interval(sample));
  const int m_max = max_trig_frequency(sample.size());
  TrigFit fit = fit_trig_coefficients(sample, A, m_max);

  const double n = double(sample.size());
  const double step = 2.0 * kappa * W / n;
  // The contrast is the L2 norm on the original scale: coefficients fitted on
  // [0,1] carry a factor 1 / |A| there.
  const double inv_len = 1.0 / A.length();
  TrigSelection selection;
  selection.criteria.resize(std::size_t(m_max) + 1);
  double crit = -fit.coeffs[0] * fit.coeffs[0] * inv_len + kappa * W / n;
  selection.criteria[0] = crit;
  int best = 0;
  for (int m = 1; m <= m_max; ++m) {
    const double ac = fit.coeffs[2 * m - 1];
    const double as = fit.coeffs[2 * m];
    crit = crit - (ac * ac + as * as) * inv_len + step;
    selection.criteria[m] = crit;
    if (crit < selection.criteria[best]) {
      best = m;
    }
  }

  auto& est = selection.estimate;
  est.m = best;
  est.coeffs.assign(fit.coeffs.begin(), fit.coeffs.begin() + 2 * best + 1);
  est.interval = A;
  est.n = sample.size();
  est.dropped = fit.dropped;
  est.criterion = selection.criteria[best];
  return selection;
}

TrigEstimate select_trig_model(const Sample& sample, std::optional<Interval> interval,
                               double kappa, double W)
{
  return select_trig_model_path(sample, interval, kappa, W).estimate;
}

double evaluate_trig(const TrigEstimate& est, double x)
{
  if (!est.interval.contains(x)) {
    return 0.0;
  }
  const double len = est.interval.length();
  const double y = (x - est.interval.lo) / len;
  double value = est.coeffs[0];
  for (int j = 1; j <= est.m; ++j) {
    const double arg = two_pi * j * y;
    value += sqrt2 * (est.coeffs[2 * j - 1] * std::cos(arg) + est.coeffs[2 * j] * std::sin(arg));
  }
  return value / len;
}

double evaluate_trig_clipped(const TrigEstimate& est, double x)
{
  return std::max(0.0, evaluate_trig(est, x));
}

} // namespace pileup
