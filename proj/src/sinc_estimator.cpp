#include "pileup/sinc_estimator.hpp"

#include "pileup/errors.hpp"
#include "pileup/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pileup {

namespace {

constexpr double pi = std::numbers::pi;

double sinc(double t)
{
  if (std::abs(t) < 1e-8) {
    return 1.0 - (pi * t) * (pi * t) / 6.0;
  }
  return std::sin(pi * t) / (pi * t);
}

int next_power_of_two(int n)
{
  int p = 1;
  while (p < n) {
    p <<= 1;
  }
  return p;
}

std::string describe(double u)
{
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << u;
  return os.str();
}

} // namespace

Complex weighted_ecf(const Sample& sample, double u)
{
  if (sample.empty()) {
    throw DomainError("empty sample");
  }
  const auto values = sample.values();
  const auto weights = sample.weights();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    re += weights[k] * std::cos(u * values[k]);
    im -= weights[k] * std::sin(u * values[k]);
  }
  const double n = double(values.size());
  return {re / n, im / n};
}

double sinc_basis(int m, int j, double x)
{
  return std::sqrt(double(m)) * sinc(m * x - j);
}

std::vector<Complex> sinc_coefficients(const Sample& sample, const NoiseModel& noise, int m,
                                       int T, int K)
{
  if (sample.empty()) {
    throw DomainError("empty sample");
  }
  if (m < 1) {
    throw DomainError("sinc cutoff m must be >= 1");
  }
  if (K < 0) {
    throw ConfigError("truncation K must be nonnegative");
  }
  if (T < 2 || !is_power_of_two(std::size_t(T))) {
    throw ConfigError("FFT size T = " + std::to_string(T) + " is not a power of two");
  }
  if (T < 2 * K + 2) {
    throw ConfigError("FFT size T = " + std::to_string(T) + " is below 2K + 2 = " +
                      std::to_string(2 * K + 2));
  }

  // Nodes u_t = pi m (2t/T - 1). The t >= T/2 half is u = k du, k = 0..T/2-1,
  // and the rest follows from f*(-u) = conj f*(u); t = 0 is u = -pi m.
  const std::size_t half = std::size_t(T) / 2;
  const double du = 2.0 * pi * m / T;
  std::vector<Complex> ecf(half + 1);
  characteristic_grid(sample.values(), sample.weights(), 0.0, du, ecf);
  std::vector<Complex> eta(half + 1);
  noise.ft_grid(0.0, du, eta);

  // An estimated transform is only trusted where |f*|^2 >= 1/M, the same floor
  // the empirical Delta uses; below it the transform is sampling noise.
  const double trust = noise.is_empirical() ? 1.0 / double(noise.empirical_size()) : 0.0;
  std::vector<Complex> ratio(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double power = std::norm(eta[k]);
    // |f*| below 1e-12 is a rounding-level zero; dividing by it amplifies noise
    if (!(power > 1e-24) || !std::isfinite(power)) {
      throw NumericError("noise Fourier transform vanishes at u = " + describe(double(k) * du));
    }
    ratio[k] = power < trust ? Complex(0.0, 0.0) : ecf[k] / eta[k];
  }

  std::vector<Complex> H(static_cast<std::size_t>(T));
  // Trapezoid end correction: u = +pi m wraps onto the t = 0 node, so that slot
  // carries the mean of the two endpoint values, Re ratio(pi m).
  H[0] = Complex(ratio[half].real(), 0.0);
  for (std::size_t t = 1; t < half; ++t) {
    H[t] = std::conj(ratio[half - t]);
  }
  for (std::size_t t = half; t < std::size_t(T); ++t) {
    H[t] = ratio[t - half];
  }
  std::vector<Complex> H_bar(H.size());
  std::transform(H.begin(), H.end(), H_bar.begin(), [](Complex z) { return std::conj(z); });

  const auto forward = inverse_fft(H);
  const auto backward = inverse_fft(H_bar);

  const double root_m = std::sqrt(double(m));
  std::vector<Complex> coeffs(2 * std::size_t(K) + 1);
  for (int j = 0; j <= K; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    coeffs[std::size_t(K + j)] = sign * root_m * forward[std::size_t(j)];
    if (j > 0) {
      coeffs[std::size_t(K - j)] = sign * root_m * backward[std::size_t(j)];
    }
  }
  return coeffs;
}

double sinc_contrast(std::span<const Complex> coeffs)
{
  double s = 0.0;
  for (const auto& a : coeffs) {
    s += std::norm(a);
  }
  return -s;
}

std::vector<int> cutoff_collection(const NoiseModel& noise, std::size_t n, int riemann_points)
{
  if (n == 0) {
    throw DomainError("cutoff_collection requires n >= 1");
  }
  std::vector<int> ms{1};
  const double limit = double(n);
  for (int m = 2; std::size_t(m) <= n; ++m) {
    if (noise.delta(m, riemann_points) > limit) {
      break;
    }
    ms.push_back(m);
  }
  return ms;
}

int default_truncation(int m, double z_max, std::size_t n)
{
  const double span = std::ceil(double(m) * std::max(z_max, 0.0)) + 32.0;
  return int(std::min<double>(double(n), span));
}

double sinc_penalty(const WeightProfile& profile, double kappa_prime, double kappa_pp,
                    std::size_t n, double delta)
{
  const double nn = double(n);
  return kappa_prime * (profile.W + kappa_pp * profile.c_w * profile.c_w * std::log(nn)) *
         delta / nn;
}

SincEstimate fit_sinc(const Sample& sample, const NoiseModel& noise, int m,
                      const SincOptions& options)
{
  if (sample.empty()) {
    throw DomainError("empty sample");
  }
  SincEstimate est;
  est.m = m;
  est.K = options.K.value_or(default_truncation(m, sample.max(), sample.size()));
  est.T = std::max(options.T, next_power_of_two(2 * est.K + 2));
  est.coeffs = sinc_coefficients(sample, noise, m, est.T, est.K);
  est.n = sample.size();
  return est;
}

SincSelection select_sinc_cutoff_path(const Sample& sample, const NoiseModel& noise,
                                      const WeightProfile& profile, const SincOptions& options)
{
  if (sample.empty()) {
    throw DomainError("empty sample");
  }
  if (!(options.kappa_prime > 0.0) || !(options.kappa_pp >= 0.0)) {
    throw ConfigError("kappa' must be positive and kappa'' nonnegative");
  }
  const std::size_t n = sample.size();
  SincSelection selection;
  const auto ms = cutoff_collection(noise, n, options.riemann_points);
  for (int m : ms) {
    SincEstimate est = fit_sinc(sample, noise, m, options);
    CutoffCandidate c;
    c.m = m;
    c.delta = noise.delta(m, options.riemann_points);
    c.contrast = sinc_contrast(est.coeffs);
    c.penalty = sinc_penalty(profile, options.kappa_prime, options.kappa_pp, n, c.delta);
    est.criterion = c.contrast + c.penalty;
    const bool better =
      selection.candidates.empty() ||
      est.criterion < selection.estimate.criterion;
    selection.candidates.push_back(c);
    if (better) {
      selection.estimate = std::move(est);
    }
  }
  if (noise.is_empirical() && noise.empirical_size() < n) {
    selection.estimate.warnings.push_back("noise sample size " +
                                          std::to_string(noise.empirical_size()) +
                                          " is below the observation count " + std::to_string(n));
  }
  return selection;
}

SincEstimate select_sinc_cutoff(const Sample& sample, const NoiseModel& noise,
                                const WeightProfile& profile, const SincOptions& options)
{
  return select_sinc_cutoff_path(sample, noise, profile, options).estimate;
}

Complex evaluate_sinc_complex(const SincEstimate& est, double x)
{
  const double mx = est.m * x;
  const double s = std::sin(pi * mx);
  const double root_m = std::sqrt(double(est.m));
  Complex total(0.0, 0.0);
  for (int j = -est.K; j <= est.K; ++j) {
    const double arg = mx - j;
    double phi;
    if (std::abs(arg) < 1e-6) {
      phi = root_m * sinc(arg);
    } else {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      phi = root_m * sign * s / (pi * arg);
    }
    total += est.coefficient(j) * phi;
  }
  return total;
}

double evaluate_sinc(const SincEstimate& est, double x)
{
  return evaluate_sinc_complex(est, x).real();
}

double evaluate_sinc_clipped(const SincEstimate& est, double x)
{
  return std::max(0.0, evaluate_sinc(est, x));
}

} // namespace pileup
