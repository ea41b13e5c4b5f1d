#include "oracles.hpp"

#include "pileup/errors.hpp"
#include "pileup/sample.hpp"
#include "pileup/targets.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <filesystem>
#include <fstream>

TEST_SUITE_BEGIN("samplers");

using namespace pileup;
using doctest::Approx;

TEST_CASE("target densities integrate to one and match their CDFs")
{
  for (const auto& t : {TargetDistribution::gamma33(), TargetDistribution::exp3(),
                        TargetDistribution::pareto(), TargetDistribution::weibull(),
                        TargetDistribution::exponential(0.7)}) {
    CAPTURE(t.name());
    const double inf = std::numeric_limits<double>::infinity();
    auto pdf = [&t](double x) { return t.pdf(x); };
    const double total =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(pdf, 0.0, inf, 20, 1e-12);
    CHECK(total == Approx(1.0).epsilon(1e-6));
    for (double x : {0.3, 1.0, 4.0}) {
      // x = t^4 tames the Weibull singularity at 0
      const double part = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double t) { return 4.0 * t * t * t * pdf(t * t * t * t); }, 0.0, std::pow(x, 0.25), 20,
        1e-14);
      CHECK(t.cdf(x) == Approx(part).epsilon(1e-8));
      CHECK(t.quantile(t.cdf(x)) == Approx(x).epsilon(1e-9));
    }
    CHECK(t.pdf(-1.0) == 0.0);
    CHECK(t.cdf(-1.0) == 0.0);
  }
}

TEST_CASE("quantile anchors")
{
  CHECK(TargetDistribution::exp3().quantile(1.0 - std::exp(-1.0)) == Approx(3.0));
  CHECK(TargetDistribution::pareto().survival_quantile(1.0) == 0.0);
  CHECK(TargetDistribution::gamma33().mean() == Approx(9.0));
  CHECK_THROWS_AS(TargetDistribution::exp3().quantile(1.0), DomainError);
  CHECK_THROWS_AS(TargetDistribution::exp3().quantile(-0.1), DomainError);
  CHECK_THROWS_AS(TargetDistribution::exponential(0.0), DomainError);
  CHECK_THROWS_AS(TargetDistribution::parse("lognormal"), ConfigError);
  CHECK(TargetDistribution::parse("exp:2").rate() == 2.0);
}

TEST_CASE("target samplers pass a KS test at n = 1e5")
{
  const std::size_t n = 100000;
  std::uint64_t seed = 11;
  for (const auto& t : {TargetDistribution::gamma33(), TargetDistribution::exp3(),
                        TargetDistribution::pareto(), TargetDistribution::weibull()}) {
    CAPTURE(t.name());
    const auto x = sample_target(t, n, seed++);
    CHECK(oracle::ks_distance(x, [&t](double v) { return t.cdf(v); }) <
          oracle::ks_critical_1pct(n));
  }
  CHECK_THROWS_AS(sample_target(TargetDistribution::exp3(), 0, 1), DomainError);
}

TEST_CASE("Gamma mean over 1e6 draws")
{
  const std::size_t n = 1000000;
  const auto x = sample_target(TargetDistribution::gamma33(), n, 5);
  double s = 0.0;
  for (double v : x) {
    s += v;
  }
  // sd of Gamma(3, 3) is 3 sqrt(3)
  CHECK(std::abs(s / n - 9.0) < 4.0 * 3.0 * std::sqrt(3.0) / std::sqrt(double(n)));
}

TEST_CASE("truncated counts")
{
  std::size_t ones = 0;
  RandomStream rng(3);
  for (int i = 0; i < 10000; ++i) {
    ones += draw_count(GeneratingModel::poisson(1e-8), rng) == 1;
  }
  CHECK(ones == 10000);

  const std::size_t draws = 1000000;
  const double mu = 1.0;
  const double mean = mu / (1.0 - std::exp(-mu));
  const double second = mu * (mu + 1.0) / (1.0 - std::exp(-mu));
  const double sd = std::sqrt(second - mean * mean);
  double s = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    s += double(draw_count(GeneratingModel::poisson(mu), rng));
  }
  CHECK(std::abs(s / draws - mean) < 4.0 * sd / std::sqrt(double(draws)));

  double t = 0.0;
  const auto tab = GeneratingModel::tabulated({0.5, 0.5});
  for (std::size_t i = 0; i < draws; ++i) {
    t += double(draw_count(tab, rng));
  }
  CHECK(std::abs(t / draws - 1.5) < 4.0 * 0.5 / std::sqrt(double(draws)));

  CHECK(sample_truncated_count(GeneratingModel::poisson(2.0), 9) ==
        sample_truncated_count(GeneratingModel::poisson(2.0), 9));
}

TEST_CASE("pile-up samples follow G = 1 - M(1 - F)")
{
  const auto exp3 = TargetDistribution::exp3();
  {
    const auto model = GeneratingModel::poisson(1e-8);
    const auto s = sample_pileup(exp3, model, std::nullopt, 10000, 21);
    std::vector<double> v(s.values().begin(), s.values().end());
    CHECK(oracle::ks_distance(v, [&](double z) { return exp3.cdf(z); }) <
          oracle::ks_critical_1pct(v.size()));
  }
  {
    const auto model = GeneratingModel::poisson(2.0);
    const auto s = sample_pileup(exp3, model, std::nullopt, 100000, 22);
    std::vector<double> v(s.values().begin(), s.values().end());
    CHECK(oracle::ks_distance(v, [&](double z) { return pileup_cdf(model, exp3.cdf(z)); }) <
          oracle::ks_critical_1pct(v.size()));
    CHECK(std::is_sorted(v.begin(), v.end()));
    const auto p = weight_profile(model);
    for (double w : s.weights()) {
      CHECK(w >= p.w0 - 1e-12);
      CHECK(w <= p.w1 + 1e-12);
    }
  }
  {
    const auto s = sample_pileup(exp3, GeneratingModel::poisson(1.0), NoiseModel::exponential(1.0),
                                 100000, 23);
    CHECK(s.min() >= 0.0);
  }
}

TEST_CASE("pile-up moment identity")
{
  // E[Y] = E[Z w(G(Z))], estimated by the L-statistic (1/n) sum Z_(i) w(i/n).
  const std::size_t n = 100000;
  const auto model = GeneratingModel::poisson(2.0);
  const auto exp3 = TargetDistribution::exp3();
  const auto s = sample_pileup(exp3, model, std::nullopt, n, 31);
  double est = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s.values()[i] * s.weights()[i];
    est += t;
    sq += t * t;
  }
  est /= n;
  const double se = std::sqrt((sq / n - est * est) / n);
  CHECK(std::abs(est - 3.0) < 4.0 * se);
}

TEST_CASE("ecdf")
{
  const auto s = Sample::with_rank_weights({3.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  CHECK(s.values()[0] == 1.0);
  CHECK(ecdf(s, 0.5) == 0.0);
  CHECK(ecdf(s, 3.0) == 1.0);
  CHECK(ecdf(s, 2.0) == Approx(2.0 / 3.0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(ecdf(s, s.values()[i]) == double(i + 1) / 3.0);
  }
  CHECK_THROWS_AS(Sample::with_rank_weights({}, {}), DomainError);
  CHECK_THROWS_AS(Sample::with_rank_weights({1.0, 2.0}, {1.0}), DomainError);
}

TEST_CASE("determinism and stream independence")
{
  const auto a = sample_pileup(TargetDistribution::weibull(), GeneratingModel::poisson(0.5),
                               NoiseModel::biexponential_reference(), 500, 77);
  const auto b = sample_pileup(TargetDistribution::weibull(), GeneratingModel::poisson(0.5),
                               NoiseModel::biexponential_reference(), 500, 77);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  CHECK(stream_seed(1, 0, 0) != stream_seed(1, 1, 0));
  CHECK(stream_seed(1, 0, 0) != stream_seed(1, 0, 1));
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(rng.index(7) < 7);
  }
}

TEST_CASE("CSV values")
{
  const std::vector<double> v{0.1, 2.5, 1e-7, 12345.678};
  const auto text = format_values_csv(v);
  CHECK(text.find(',') == std::string::npos);
  CHECK(parse_values_csv(text) == v);
  CHECK(parse_values_csv("1\r\n2\n\n3") == std::vector<double>{1, 2, 3});

  auto message = [](const std::string& text) {
    try {
      parse_values_csv(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("z\n1\n").find("line 1") != std::string::npos);
  CHECK(message("1\n2\nabc\n").find("line 3") != std::string::npos);
  CHECK(message("").find("empty sample") != std::string::npos);
  const auto neg = message("1\n-2\n0\n");
  CHECK(neg.find("2 nonpositive") != std::string::npos);
  CHECK(neg.find("line 2") != std::string::npos);
  CHECK(parse_values_csv("-1\n", {.require_positive = false}) == std::vector<double>{-1});

  const auto path = std::filesystem::temp_directory_path() / "pileup_csv_test.csv";
  write_values_csv(path, v);
  CHECK(read_values_csv(path) == v);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_values_csv("/nonexistent/never.csv"), InputError);
}

TEST_SUITE_END();
