#include "pileup/noise.hpp"

#include "pileup/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace pileup {

namespace {

constexpr double pi = std::numbers::pi;

struct BiExpWeights
{
  double a; // alpha nu / (alpha - beta)
  double b; // beta tau / (alpha - beta)
};

BiExpWeights weights_of(const BiExponentialNoise& p)
{
  return {p.alpha * p.nu / (p.alpha - p.beta), p.beta * p.tau / (p.alpha - p.beta)};
}

/*
 * (1/2pi) int_{-L}^{L} dv / |f*(v)|^2 for the unit bi-exponential, where
 * 1/|f*|^2 = (nu^2 + v^2)(tau^2 + v^2) / (nu^2 tau^2 + c^2 v^2), c = a - b.
 */
double biexp_inverse_power_integral(const BiExponentialNoise& p, double L)
{
  const auto [a, b] = weights_of(p);
  const double c = a - b;
  const double q = p.nu * p.nu * p.tau * p.tau;
  const double s = p.nu * p.nu + p.tau * p.tau;
  const double eps = c * c / q;

  if (eps * L * L < 0.25) {
    // Expand 1/(q (1 + eps v^2)) as a geometric series and integrate
    // v^{2k} (v^4 + s v^2 + q) term by term over [-L, L].
    auto moment = [L](int j) { return 2.0 * std::pow(L, 2 * j + 1) / (2 * j + 1); };
    double total = 0.0;
    double factor = 1.0;
    for (int k = 0; k < 400; ++k) {
      const double term = factor * (moment(k + 2) + s * moment(k + 1) + q * moment(k));
      total += term;
      if (std::abs(term) <= 1e-18 * std::abs(total)) {
        break;
      }
      factor *= -eps;
    }
    return total / q / (2.0 * pi);
  }

  // Polynomial division: v^4 + s v^2 + q = (c^2 v^2 + q)(alpha2 v^2 + beta2) + r.
  const double c2 = c * c;
  const double alpha2 = 1.0 / c2;
  const double beta2 = (s - q / c2) / c2;
  const double r = q - q * beta2;
  const double rq = std::sqrt(q);
  const double ac = std::abs(c);
  const double poly = 2.0 * (alpha2 * L * L * L / 3.0 + beta2 * L);
  const double rational = 2.0 * r / (ac * rq) * std::atan(ac * L / rq);
  return (poly + rational) / (2.0 * pi);
}

template<class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

} // namespace

NoiseModel NoiseModel::exponential(double theta, double scale)
{
  require_positive(theta, "exponential noise rate");
  require_positive(scale, "noise scale");
  return NoiseModel(ExponentialNoise{theta}, scale);
}

NoiseModel NoiseModel::biexponential(double alpha, double beta, double nu, double tau,
                                     double scale)
{
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  require_positive(nu, "nu");
  require_positive(tau, "tau");
  require_positive(scale, "noise scale");
  if (!(alpha > beta)) {
    throw DomainError("bi-exponential noise requires alpha > beta");
  }
  if (!(nu < tau)) {
    throw DomainError("bi-exponential noise requires nu < tau");
  }
  if (!(beta * tau >= alpha * nu)) {
    throw DomainError("bi-exponential noise requires beta tau / (alpha nu) >= 1");
  }
  return NoiseModel(BiExponentialNoise{alpha, beta, nu, tau}, scale);
}

NoiseModel NoiseModel::empirical(std::vector<double> values)
{
  if (values.empty()) {
    throw DomainError("empirical noise needs at least one value");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw DomainError("empirical noise values must be finite");
    }
  }
  return NoiseModel(EmpiricalNoise{std::move(values)}, 1.0);
}

NoiseModel NoiseModel::with_variance(double sigma2) const
{
  require_positive(sigma2, "noise variance");
  if (is_none()) {
    throw ConfigError("degenerate noise cannot be rescaled");
  }
  const double unit_variance = variance() / (scale_ * scale_);
  if (!(unit_variance > 0.0)) {
    throw ConfigError("noise with zero variance cannot be rescaled");
  }
  return NoiseModel(kind_, std::sqrt(sigma2 / unit_variance));
}

std::size_t NoiseModel::empirical_size() const
{
  if (const auto* e = std::get_if<EmpiricalNoise>(&kind_)) {
    return e->values.size();
  }
  return 0;
}

double NoiseModel::mean() const
{
  return scale_ *
         std::visit(Overloaded{[](const NoNoise&) { return 0.0; },
                               [](const ExponentialNoise& e) { return 1.0 / e.theta; },
                               [](const BiExponentialNoise& p) {
                                 const auto [a, b] = weights_of(p);
                                 return a / (p.nu * p.nu) - b / (p.tau * p.tau);
                               },
                               [](const EmpiricalNoise& e) {
                                 return std::accumulate(e.values.begin(), e.values.end(), 0.0) /
                                        double(e.values.size());
                               }},
                    kind_);
}

double NoiseModel::variance() const
{
  const double unit = std::visit(
    Overloaded{[](const NoNoise&) { return 0.0; },
               [](const ExponentialNoise& e) { return 1.0 / (e.theta * e.theta); },
               [](const BiExponentialNoise& p) {
                 const auto [a, b] = weights_of(p);
                 const double m1 = a / (p.nu * p.nu) - b / (p.tau * p.tau);
                 const double m2 = 2.0 * a / (p.nu * p.nu * p.nu) - 2.0 * b / (p.tau * p.tau * p.tau);
                 return m2 - m1 * m1;
               },
               [](const EmpiricalNoise& e) {
                 const double n = double(e.values.size());
                 const double m = std::accumulate(e.values.begin(), e.values.end(), 0.0) / n;
                 double ss = 0.0;
                 for (double v : e.values) {
                   ss += (v - m) * (v - m);
                 }
                 return ss / n;
               }},
    kind_);
  return scale_ * scale_ * unit;
}

std::optional<int> NoiseModel::smoothness_order() const
{
  return std::visit(Overloaded{[](const NoNoise&) -> std::optional<int> { return std::nullopt; },
                               [](const ExponentialNoise&) -> std::optional<int> { return 1; },
                               [](const BiExponentialNoise& p) -> std::optional<int> {
                                 const auto [a, b] = weights_of(p);
                                 return std::abs(a - b) <= 1e-12 * a ? 2 : 1;
                               },
                               [](const EmpiricalNoise&) -> std::optional<int> {
                                 return std::nullopt;
                               }},
                    kind_);
}

std::string NoiseModel::description() const
{
  std::ostringstream os;
  os.imbue(std::locale::classic());
  std::visit(Overloaded{[&](const NoNoise&) { os << "none"; },
                        [&](const ExponentialNoise& e) { os << "exp(theta=" << e.theta << ")"; },
                        [&](const BiExponentialNoise& p) {
                          os << "biexp(alpha=" << p.alpha << ",beta=" << p.beta
                             << ",nu=" << p.nu << ",tau=" << p.tau << ")";
                        },
                        [&](const EmpiricalNoise& e) {
                          os << "empirical(M=" << e.values.size() << ")";
                        }},
             kind_);
  if (scale_ != 1.0) {
    os << "*" << scale_;
  }
  return os.str();
}

Complex NoiseModel::ft(double u) const
{
  const double su = scale_ * u;
  return std::visit(
    Overloaded{[](const NoNoise&) { return Complex(1.0, 0.0); },
               [su](const ExponentialNoise& e) { return e.theta / Complex(e.theta, su); },
               [su](const BiExponentialNoise& p) {
                 const auto [a, b] = weights_of(p);
                 return a / Complex(p.nu, su) - b / Complex(p.tau, su);
               },
               [su](const EmpiricalNoise& e) {
                 double re = 0.0;
                 double im = 0.0;
                 for (double v : e.values) {
                   re += std::cos(su * v);
                   im -= std::sin(su * v);
                 }
                 const double n = double(e.values.size());
                 return Complex(re / n, im / n);
               }},
    kind_);
}

void NoiseModel::ft_grid(double u0, double du, std::span<Complex> out) const
{
  if (const auto* e = std::get_if<EmpiricalNoise>(&kind_)) {
    std::vector<double> scaled(e->values);
    for (auto& v : scaled) {
      v *= scale_;
    }
    characteristic_grid(scaled, {}, u0, du, out);
    return;
  }
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = ft(u0 + double(t) * du);
  }
}

double NoiseModel::delta(int m, int riemann_points) const
{
  if (m < 1) {
    throw DomainError("delta requires m >= 1");
  }
  const double md = m;
  return std::visit(
    Overloaded{[md](const NoNoise&) { return md; },
               [md, this](const ExponentialNoise& e) {
                 const double r = scale_ / e.theta;
                 return md + pi * pi * md * md * md * r * r / 3.0;
               },
               [md, this](const BiExponentialNoise& p) {
                 // Delta_s(m) = (1/s) * I(pi m s) with I the unit-scale integral.
                 return biexp_inverse_power_integral(p, pi * md * scale_) / scale_;
               },
               [md, riemann_points, this](const EmpiricalNoise& e) {
                 if (riemann_points < 2) {
                   throw ConfigError("Riemann sum needs at least 2 points");
                 }
                 const int S = riemann_points;
                 std::vector<Complex> grid(std::size_t(S) + 1);
                 ft_grid(-pi * md, 2.0 * pi * md / S, grid);
                 const double floor = 1.0 / double(e.values.size());
                 double total = 0.0;
                 for (const auto& z : grid) {
                   total += 1.0 / std::max(std::norm(z), floor);
                 }
                 return md / S * total;
               }},
    kind_);
}

double NoiseModel::draw(RandomStream& rng) const
{
  return scale_ *
         std::visit(Overloaded{[](const NoNoise&) { return 0.0; },
                               [&rng](const ExponentialNoise& e) {
                                 return -std::log(rng.uniform_open()) / e.theta;
                               },
                               [&rng](const BiExponentialNoise& p) {
                                 // Envelope a e^{-nu x} >= f(x); propose Exp(nu).
                                 const auto [a, b] = weights_of(p);
                                 for (;;) {
                                   const double x = -std::log(rng.uniform_open()) / p.nu;
                                   const double accept = 1.0 - (b / a) * std::exp(-(p.tau - p.nu) * x);
                                   if (rng.uniform_open() < accept) {
                                     return x;
                                   }
                                 }
                               },
                               [&rng](const EmpiricalNoise& e) {
                                 return e.values[rng.index(e.values.size())];
                               }},
                    kind_);
}

Complex noise_ft(const NoiseModel& noise, double u)
{
  return noise.ft(u);
}

double delta_eta(const NoiseModel& noise, int m, int riemann_points)
{
  return noise.delta(m, riemann_points);
}

std::vector<double> sample_noise(const NoiseModel& noise, std::size_t n, std::uint64_t seed)
{
  RandomStream rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    v = noise.draw(rng);
  }
  return out;
}

void characteristic_grid(std::span<const double> points, std::span<const double> weights,
                         double u0, double du, std::span<Complex> out)
{
  const std::size_t n = points.size();
  if (n == 0) {
    throw DomainError("characteristic function of an empty sample");
  }
  if (!weights.empty() && weights.size() != n) {
    throw DomainError("weights and points differ in length");
  }
  // Phases are re-anchored every block to bound the recurrence drift.
  constexpr std::size_t block = 256;
  std::vector<double> pr(n), pi_(n), sr(n), si(n), wt(n);
  for (std::size_t k = 0; k < n; ++k) {
    sr[k] = std::cos(du * points[k]);
    si[k] = -std::sin(du * points[k]);
    wt[k] = weights.empty() ? 1.0 : weights[k];
  }
  const double inv_n = 1.0 / double(n);
  for (std::size_t t = 0; t < out.size(); ++t) {
    if (t % block == 0) {
      const double u = u0 + double(t) * du;
      for (std::size_t k = 0; k < n; ++k) {
        pr[k] = std::cos(u * points[k]);
        pi_[k] = -std::sin(u * points[k]);
      }
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      re += wt[k] * pr[k];
      im += wt[k] * pi_[k];
      const double nr = pr[k] * sr[k] - pi_[k] * si[k];
      const double ni = pr[k] * si[k] + pi_[k] * sr[k];
      pr[k] = nr;
      pi_[k] = ni;
    }
    out[t] = Complex(re * inv_n, im * inv_n);
  }
}

} // namespace pileup
