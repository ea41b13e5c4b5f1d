#include "pileup/generating_model.hpp"

#include "pileup/errors.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace pileup {

namespace {

void require_unit(double u, const char* what)
{
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError(std::string(what) + ": argument " + std::to_string(u) +
                      " outside [0, 1]");
  }
}

template<class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Horner evaluation of sum_k c_k u^k with c_k = masses[k-1] * factor(k).
template<class Factor>
double polynomial(std::span<const double> masses, double u, std::size_t skip, Factor factor)
{
  double acc = 0.0;
  for (std::size_t k = masses.size(); k > skip; --k) {
    acc = acc * u + masses[k - 1] * factor(k);
  }
  return acc;
}

} // namespace

GeneratingModel GeneratingModel::poisson(double mu)
{
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("Poisson parameter must be positive and finite");
  }
  return GeneratingModel(ZeroTruncatedPoisson{mu});
}

GeneratingModel GeneratingModel::tabulated(std::vector<double> masses)
{
  if (masses.size() < 2 || masses.size() > max_tabulated_count) {
    throw DomainError("tabulated count masses need 2.." + std::to_string(max_tabulated_count) +
                      " entries");
  }
  if (std::any_of(masses.begin(), masses.end(), [](double p) { return !(p >= 0.0); })) {
    throw DomainError("tabulated count masses must be nonnegative");
  }
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("tabulated count masses must sum to 1");
  }
  if (!(masses[0] > 0.0) || !(masses[1] > 0.0)) {
    throw DomainError("P(N=1) and P(N=2) must be positive");
  }
  return GeneratingModel(TabulatedMasses{std::move(masses)});
}

double GeneratingModel::mu() const
{
  if (const auto* p = std::get_if<ZeroTruncatedPoisson>(&kind_)) {
    return p->mu;
  }
  throw DomainError("tabulated generating model has no Poisson parameter");
}

std::span<const double> GeneratingModel::masses() const
{
  if (const auto* t = std::get_if<TabulatedMasses>(&kind_)) {
    return t->masses;
  }
  return {};
}

double GeneratingModel::mean_count() const
{
  return generating_derivative(*this, 1.0);
}

double generating_function(const GeneratingModel& model, double u)
{
  require_unit(u, "generating_function");
  return std::visit(
    Overloaded{
      [u](const ZeroTruncatedPoisson& p) { return std::expm1(p.mu * u) / std::expm1(p.mu); },
      [u](const TabulatedMasses& t) {
        return u * polynomial(t.masses, u, 0, [](std::size_t) { return 1.0; });
      }},
    model.kind());
}

double generating_derivative(const GeneratingModel& model, double u)
{
  require_unit(u, "generating_derivative");
  return std::visit(
    Overloaded{
      [u](const ZeroTruncatedPoisson& p) {
        return p.mu * std::exp(p.mu * u) / std::expm1(p.mu);
      },
      [u](const TabulatedMasses& t) {
        return polynomial(t.masses, u, 0, [](std::size_t k) { return double(k); });
      }},
    model.kind());
}

double generating_second_derivative(const GeneratingModel& model, double u)
{
  require_unit(u, "generating_second_derivative");
  return std::visit(
    Overloaded{
      [u](const ZeroTruncatedPoisson& p) {
        return p.mu * p.mu * std::exp(p.mu * u) / std::expm1(p.mu);
      },
      [u](const TabulatedMasses& t) {
        // sum_{k>=2} k(k-1) p_k u^(k-2)
        double acc = 0.0;
        for (std::size_t k = t.masses.size(); k >= 2; --k) {
          acc = acc * u + t.masses[k - 1] * double(k) * double(k - 1);
        }
        return acc;
      }},
    model.kind());
}

double generating_inverse(const GeneratingModel& model, double v)
{
  require_unit(v, "generating_inverse");
  if (const auto* p = std::get_if<ZeroTruncatedPoisson>(&model.kind())) {
    return std::log1p(v * std::expm1(p->mu)) / p->mu;
  }
  if (v == 0.0 || v == 1.0) {
    return v;
  }

  constexpr int max_iterations = 100;
  double lo = 0.0;
  double hi = 1.0;
  double x = 0.5;
  for (int it = 0; it < max_iterations; ++it) {
    const double residual = generating_function(model, x) - v;
    if (std::abs(residual) <= 2.0 * std::numeric_limits<double>::epsilon() * v) {
      return x;
    }
    (residual > 0.0 ? hi : lo) = x;
    if (hi - lo <= std::numeric_limits<double>::epsilon()) {
      return 0.5 * (lo + hi);
    }
    const double newton = x - residual / generating_derivative(model, x);
    x = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
  }
  throw NumericError("generating_inverse did not converge for v = " + std::to_string(v));
}

double pileup_weight(const GeneratingModel& model, double u)
{
  require_unit(u, "pileup_weight");
  if (const auto* p = std::get_if<ZeroTruncatedPoisson>(&model.kind())) {
    // (1 - e^{-mu}) / (mu (u (e^{-mu} - 1) + 1))
    const double c = std::expm1(-p->mu);
    return -c / (p->mu * (1.0 + u * c));
  }
  return 1.0 / generating_derivative(model, generating_inverse(model, 1.0 - u));
}

WeightProfile weight_profile(const GeneratingModel& model)
{
  WeightProfile profile{};
  profile.w0 = pileup_weight(model, 0.0);
  profile.w1 = pileup_weight(model, 1.0);

  if (const auto* p = std::get_if<ZeroTruncatedPoisson>(&model.kind())) {
    const double e = std::expm1(p->mu);
    profile.c_w = e * e / p->mu;
  } else {
    constexpr int grid = 10000;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i <= grid; ++i) {
      const double u = double(i) / grid;
      const double d1 = generating_derivative(model, u);
      const double d2 = generating_second_derivative(model, u);
      lo = std::min({lo, d1, d2});
      hi = std::max({hi, d1, d2});
    }
    profile.c_w = hi / (lo * lo * lo);
  }

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  double error = 0.0;
  profile.W = Quadrature::integrate(
    [&model](double u) {
      const double w = pileup_weight(model, u);
      return w * w;
    },
    0.0, 1.0, 15, 1e-12, &error);
  if (error > 1e-10) {
    throw NumericError("quadrature of w^2 did not reach tolerance");
  }
  return profile;
}

std::vector<double> weight_table(const GeneratingModel& model, std::size_t n)
{
  if (n == 0) {
    throw DomainError("weight_table requires n >= 1");
  }
  std::vector<double> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    table[i] = pileup_weight(model, double(i + 1) / double(n));
  }
  return table;
}

double pileup_cdf(const GeneratingModel& model, double target_cdf)
{
  require_unit(target_cdf, "pileup_cdf");
  return 1.0 - generating_function(model, 1.0 - target_cdf);
}

double target_cdf_from_pileup(const GeneratingModel& model, double pileup_cdf_value)
{
  require_unit(pileup_cdf_value, "target_cdf_from_pileup");
  return 1.0 - generating_inverse(model, 1.0 - pileup_cdf_value);
}

} // namespace pileup
