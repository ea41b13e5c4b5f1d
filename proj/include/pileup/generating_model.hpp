#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace pileup {

//! Zero-truncated Poisson photon count, P(N=k) = mu^k / (k! (e^mu - 1)).
struct ZeroTruncatedPoisson
{
  double mu;
};

//! Explicit count masses; masses[k-1] = P(N = k), k = 1..K_max.
struct TabulatedMasses
{
  std::vector<double> masses;
};

/*!
 * Distribution of the number N >= 1 of independent draws whose minimum is
 * observed. Exposes the probability generating function M(u) = E[u^N], its
 * first two derivatives and its inverse on [0, 1].
 *
 * Immutable after construction.
 */
class GeneratingModel
{
public:
  static constexpr std::size_t max_tabulated_count = 64;

  static GeneratingModel poisson(double mu);
  static GeneratingModel tabulated(std::vector<double> masses);

  bool is_poisson() const { return std::holds_alternative<ZeroTruncatedPoisson>(kind_); }
  //! Poisson parameter; throws DomainError for tabulated models.
  double mu() const;
  //! Tabulated masses P(N=1..K_max); empty for Poisson.
  std::span<const double> masses() const;
  //! E[N].
  double mean_count() const;

  const std::variant<ZeroTruncatedPoisson, TabulatedMasses>& kind() const { return kind_; }

private:
  explicit GeneratingModel(std::variant<ZeroTruncatedPoisson, TabulatedMasses> kind)
    : kind_(std::move(kind))
  {}

  std::variant<ZeroTruncatedPoisson, TabulatedMasses> kind_;
};

//! Bounds and regularity constants of the pile-up weight function w.
struct WeightProfile
{
  double w0;  //!< inf of w on [0, 1], attained at u = 0
  double w1;  //!< sup of w on [0, 1], attained at u = 1
  double c_w; //!< Lipschitz constant of w
  double W;   //!< integral of w^2 over [0, 1]
};

// M(u) = E[u^N].
double generating_function(const GeneratingModel& model, double u);
// M'(u) = E[N u^(N-1)].
double generating_derivative(const GeneratingModel& model, double u);
// M''(u) = E[N (N-1) u^(N-2)].
double generating_second_derivative(const GeneratingModel& model, double u);
//! Inverse of M on [0, 1]. Closed form for Poisson, safeguarded Newton
//! bisection for tabulated masses.
double generating_inverse(const GeneratingModel& model, double v);

//! Pile-up correction weight w(u) = 1 / M'(M^{-1}(1 - u)).
double pileup_weight(const GeneratingModel& model, double u);

WeightProfile weight_profile(const GeneratingModel& model);

//! w(i/n) for i = 1..n.
std::vector<double> weight_table(const GeneratingModel& model, std::size_t n);

//! CDF of the observed minimum, G = 1 - M(1 - F).
double pileup_cdf(const GeneratingModel& model, double target_cdf);
//! F = 1 - M^{-1}(1 - G).
double target_cdf_from_pileup(const GeneratingModel& model, double pileup_cdf_value);

} // namespace pileup
