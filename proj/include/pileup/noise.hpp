#pragma once

#include "pileup/random.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pileup {

using Complex = std::complex<double>;

//! f(x) = theta e^{-theta x}.
struct ExponentialNoise
{
  double theta;
};

//! f(x) = alpha nu/(alpha-beta) e^{-nu x} - beta tau/(alpha-beta) e^{-tau x}.
struct BiExponentialNoise
{
  double alpha;
  double beta;
  double nu;
  double tau;
};

//! Independent noise sample; its transform is the empirical characteristic
//! function.
struct EmpiricalNoise
{
  std::vector<double> values;
};

//! Degenerate noise (eta = 0), f*(u) = 1.
struct NoNoise
{};

/*!
 * Additive measurement-error law. The random variable is multiplied by
 * scale(), so f*_{s eta}(u) = f*_eta(s u).
 */
class NoiseModel
{
public:
  using Kind = std::variant<NoNoise, ExponentialNoise, BiExponentialNoise, EmpiricalNoise>;

  static constexpr int default_riemann_points = 2048;

  static NoiseModel none() { return NoiseModel(NoNoise{}, 1.0); }
  static NoiseModel exponential(double theta, double scale = 1.0);
  static NoiseModel biexponential(double alpha, double beta, double nu, double tau,
                                  double scale = 1.0);
  //! The two-exponential instrument response with alpha=2, beta=1, nu=1, tau=2.
  static NoiseModel biexponential_reference(double scale = 1.0)
  {
    return biexponential(2.0, 1.0, 1.0, 2.0, scale);
  }
  static NoiseModel empirical(std::vector<double> values);

  //! Same kind, rescaled so that Var(scale * eta) = sigma2 (parametric kinds).
  NoiseModel with_variance(double sigma2) const;

  const Kind& kind() const { return kind_; }
  double scale() const { return scale_; }
  bool is_empirical() const { return std::holds_alternative<EmpiricalNoise>(kind_); }
  bool is_none() const { return std::holds_alternative<NoNoise>(kind_); }
  std::size_t empirical_size() const;

  //! Mean and variance of the scaled variable.
  double mean() const;
  double variance() const;
  //! Ordinary-smooth order gamma (|f*|^2 ~ u^{-2 gamma}); empty for
  //! empirical or degenerate noise.
  std::optional<int> smoothness_order() const;
  std::string description() const;

  //! f*(u) = E[e^{-i u eta}].
  Complex ft(double u) const;
  //! f*(u0 + k du) for k = 0..out.size()-1.
  void ft_grid(double u0, double du, std::span<Complex> out) const;

  //! (1/2pi) int_{-pi m}^{pi m} du / |f*(u)|^2.
  double delta(int m, int riemann_points = default_riemann_points) const;

  double draw(RandomStream& rng) const;

private:
  NoiseModel(Kind kind, double scale)
    : kind_(std::move(kind))
    , scale_(scale)
  {}

  Kind kind_;
  double scale_;
};

Complex noise_ft(const NoiseModel& noise, double u);
double delta_eta(const NoiseModel& noise, int m,
                 int riemann_points = NoiseModel::default_riemann_points);
std::vector<double> sample_noise(const NoiseModel& noise, std::size_t n, std::uint64_t seed);

/*!
 * (1/n) sum_k weight_k e^{-i u_t x_k} on the grid u_t = u0 + t du, written to
 * out. Unit weights when weights is empty. Uses a per-point phase recurrence,
 * so the cost is one complex multiply per (point, node).
 */
void characteristic_grid(std::span<const double> points, std::span<const double> weights,
                         double u0, double du, std::span<Complex> out);

} // namespace pileup
