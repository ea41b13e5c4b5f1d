// Acceptance checks. One PASS/FAIL line per criterion; nonzero exit if any fails.
//   pileup_acceptance            all criteria
//   pileup_acceptance --only 4   one criterion

#include "oracles.hpp"

#include "pileup/harness.hpp"
#include "pileup/sinc_estimator.hpp"
#include "pileup/trig_estimator.hpp"

#include <chrono>
#include <cstring>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace pileup;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
  bool ok = true;
  std::ostringstream detail;

  void fail(const std::string& why)
  {
    if (!ok) {
      detail << "; ";
    }
    ok = false;
    detail << why;
  }
};

std::string fmt(double v, int prec = 4)
{
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

bool within_factor(double value, double ref, double factor)
{
  return value >= ref / factor && value <= ref * factor;
}

// ---- 1: noise-free trig benchmark ---------------------------------------

Outcome criterion1()
{
  Outcome o;
  struct Case
  {
    const char* name;
    TargetDistribution target;
    double mu;
    double ref100;
  };
  const Case cases[] = {
    {"gamma", TargetDistribution::gamma33(), 0.01, 0.0434},
    {"gamma", TargetDistribution::gamma33(), 0.5, 0.0519},
    {"gamma", TargetDistribution::gamma33(), 2.0, 0.0610},
    {"exp", TargetDistribution::exp3(), 0.01, 2.325},
    {"exp", TargetDistribution::exp3(), 0.5, 2.3306},
    {"exp", TargetDistribution::exp3(), 2.0, 2.4329},
  };
  const auto t0 = Clock::now();
  std::ostringstream cells;
  bool bad = false;
  for (const auto& c : cases) {
    SimulationConfig cfg;
    cfg.target = c.target;
    cfg.generating = GeneratingModel::poisson(c.mu);
    cfg.n = 1000;
    cfg.replicates = 25;
    cfg.kappa = 0.5;
    const auto r = run_replicates(cfg);
    const double got = 100.0 * r.mean_mise;
    const bool ok = within_factor(got, c.ref100, 2.0);
    bad |= !ok;
    cells << ' ' << c.name << "(mu=" << c.mu << ")=" << fmt(got, 3) << (ok ? "" : "!") << " vs "
          << c.ref100 << ';';
  }
  const double t = seconds_since(t0);
  if (bad) {
    o.fail("100xMISE outside factor 2 (marked !)");
  }
  if (t >= 120.0) {
    o.fail("runtime " + fmt(t, 3) + " s >= 120 s");
  }
  o.detail << (o.ok ? "" : " |") << cells.str() << " runtime " << fmt(t, 3) << " s";
  return o;
}

// ---- 2: sinc cutoff selection --------------------------------------------

Outcome criterion2()
{
  Outcome o;
  const auto t0 = Clock::now();
  auto run = [](double sigma, double mu) {
    SimulationConfig cfg;
    cfg.target = TargetDistribution::gamma33();
    cfg.generating = GeneratingModel::poisson(mu);
    cfg.estimator = EstimatorKind::Sinc;
    cfg.sigma2 = sigma * sigma;
    cfg.noise = NoiseModel::exponential(1.0).with_variance(cfg.sigma2);
    cfg.n = 2000;
    cfg.replicates = 25;
    cfg.sinc.kappa_prime = 1.0;
    cfg.sinc.kappa_pp = 0.001;
    return run_replicates(cfg);
  };
  const auto wide = run(0.7, 0.01);
  if (std::abs(wide.mean_m - 3.36) > 1.0) {
    o.fail("sigma=0.7 mu=0.01: mean m " + fmt(wide.mean_m) + " not within 3.36 +- 1");
  }
  const auto narrow = run(0.1, 2.0);
  std::size_t threes = 0;
  for (int m : narrow.selected_models) {
    threes += m == 3;
  }
  const double frac = double(threes) / double(narrow.selected_models.size());
  if (frac < 0.8) {
    o.fail("sigma=0.1 mu=2: m=3 in " + fmt(100.0 * frac, 3) + "% of replicates (< 80%)");
  }
  const double t = seconds_since(t0);
  if (t >= 180.0) {
    o.fail("runtime " + fmt(t, 3) + " s >= 180 s");
  }
  o.detail << (o.ok ? "" : " |") << " mean m " << fmt(wide.mean_m) << " (sd " << fmt(wide.sd_m)
           << "), m=3 fraction " << fmt(frac, 3) << " (mean m " << fmt(narrow.mean_m)
           << "), runtime " << fmt(t, 3) << " s";
  return o;
}

// ---- 3 and 6: noisy benchmark cells, exact and estimated noise ----------

struct Cell
{
  std::string target;
  double sigma2;
  double mu;
};

bool operator<(const Cell& a, const Cell& b)
{
  return std::tie(a.target, a.sigma2, a.mu) < std::tie(b.target, b.sigma2, b.mu);
}

const std::vector<Cell>& table_cells()
{
  static const std::vector<Cell> cells = [] {
    std::vector<Cell> v{{"gamma", 0.2, 0.5}, {"exp", 0.2, 0.5}};
    for (const char* t : {"gamma", "exp", "pareto", "weibull"}) {
      for (double s2 : {0.2, 1.0}) {
        v.push_back({t, s2, 2.0});
      }
    }
    return v;
  }();
  return cells;
}

const MISEReport& table_report(const Cell& cell, std::size_t noise_sample_size)
{
  static std::map<std::pair<Cell, std::size_t>, MISEReport> cache;
  const auto key = std::make_pair(cell, noise_sample_size);
  auto it = cache.find(key);
  if (it == cache.end()) {
    SimulationConfig cfg;
    cfg.target = TargetDistribution::parse(cell.target);
    cfg.generating = GeneratingModel::poisson(cell.mu);
    cfg.estimator = EstimatorKind::Sinc;
    cfg.sigma2 = cell.sigma2;
    cfg.noise = NoiseModel::exponential(1.0).with_variance(cell.sigma2);
    cfg.noise_sample_size = noise_sample_size;
    cfg.n = 2000; // not stated for the table; assumed
    cfg.replicates = 25;
    it = cache.emplace(key, run_replicates(cfg)).first;
  }
  return it->second;
}

std::string cell_name(const Cell& c)
{
  return c.target + "(" + fmt(c.sigma2) + "," + fmt(c.mu) + ")";
}

Outcome criterion3()
{
  Outcome o;
  std::ostringstream cells;
  const double gamma = 100.0 * table_report({"gamma", 0.2, 0.5}, 0).mean_mise;
  if (gamma < 0.021 || gamma > 0.19) {
    o.fail("gamma(0.2,0.5) = " + fmt(gamma) + " outside [0.021, 0.19]");
  }
  const double exp = 100.0 * table_report({"exp", 0.2, 0.5}, 0).mean_mise;
  if (!within_factor(exp, 1.11, 3.0)) {
    o.fail("exp(0.2,0.5) = " + fmt(exp) + " not within factor 3 of 1.11");
  }
  cells << " gamma(0.2,0.5)=" << fmt(gamma) << " exp(0.2,0.5)=" << fmt(exp) << ';';
  // the reference gamma mu = 0.5 pair is itself not monotone, so compare at mu = 2
  for (const char* t : {"gamma", "exp", "pareto", "weibull"}) {
    const double lo = 100.0 * table_report({t, 0.2, 2.0}, 0).mean_mise;
    const double hi = 100.0 * table_report({t, 1.0, 2.0}, 0).mean_mise;
    if (!(hi > lo)) {
      o.fail(std::string(t) + " mu=2: sigma2=1 (" + fmt(hi) + ") <= sigma2=0.2 (" + fmt(lo) + ")");
    }
    cells << ' ' << t << "(mu=2) " << fmt(lo) << " -> " << fmt(hi) << ';';
  }
  o.detail << (o.ok ? "" : " |") << cells.str();
  return o;
}

Outcome criterion6()
{
  Outcome o;
  std::ostringstream cells;
  for (const auto& c : table_cells()) {
    const auto& exact = table_report(c, 0);
    const auto& est = table_report(c, 500);
    const double change = std::abs(est.mean_mise - exact.mean_mise);
    if (!(change < exact.sd_mise)) {
      o.fail(cell_name(c) + " changed by " + fmt(100.0 * change) + " >= sd " +
             fmt(100.0 * exact.sd_mise));
    }
    cells << ' ' << cell_name(c) << ' ' << fmt(100.0 * exact.mean_mise, 3) << "->"
          << fmt(100.0 * est.mean_mise, 3) << ';';
  }
  o.detail << (o.ok ? "" : " |") << cells.str();
  return o;
}

// ---- 4: oracle equivalences ----------------------------------------------

double max_abs(const std::vector<Complex>& v)
{
  double m = 0.0;
  for (auto z : v) {
    m = std::max(m, std::abs(z));
  }
  return m;
}

double rel(double a, double b)
{
  return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b);
}

Outcome criterion4()
{
  Outcome o;
  // FFT vs quadrature; error relative to the largest coefficient of the set
  double worst_fft = 0.0;
  for (const auto& noise :
       {NoiseModel::exponential(1.0), NoiseModel::biexponential_reference().with_variance(0.2)}) {
    const auto s = sample_pileup(TargetDistribution::gamma33(), GeneratingModel::poisson(1.0),
                                 noise, 50, 11);
    for (int m : {1, 2, 4}) {
      const int K = 8;
      const auto c = sinc_coefficients(s, noise, m, 1 << 20, K);
      std::vector<Complex> quad;
      for (int j = -K; j <= K; ++j) {
        quad.push_back(oracle::quad_sinc_coefficient(s, noise, m, j));
      }
      const double scale = max_abs(quad);
      for (std::size_t k = 0; k < quad.size(); ++k) {
        worst_fft = std::max(worst_fft, std::abs(c[k] - quad[k]) / scale);
      }
    }
  }
  if (!(worst_fft < 1e-6)) {
    o.fail("FFT vs quadrature " + fmt(worst_fft));
  }

  // recursion vs brute force
  int mismatches = 0;
  RandomStream rng(2024);
  for (int c = 0; c < 20; ++c) {
    const std::size_t n = 20 + rng.index(300);
    const double mu = 0.01 + 3.0 * rng.uniform_open();
    const auto model = GeneratingModel::poisson(mu);
    const auto target = c % 2 ? TargetDistribution::exp3() : TargetDistribution::gamma33();
    const auto s = sample_pileup(target, model, std::nullopt, n, 900 + c);
    const double kappa = 0.1 + rng.uniform_open();
    const double W = weight_profile(model).W;
    const auto est = select_trig_model(s, std::nullopt, kappa, W);
    const auto brute = oracle::brute_force_trig_criteria(s, default_trig_interval(s), kappa, W,
                                                         max_trig_frequency(n));
    mismatches += est.m != int(oracle::argmin_first(brute));
  }
  if (mismatches) {
    o.fail(std::to_string(mismatches) + "/20 trig selections differ from brute force");
  }

  // Delta closed forms vs quadrature
  double worst_delta = 0.0;
  for (const auto& noise : {NoiseModel::exponential(1.0), NoiseModel::exponential(1.0).with_variance(0.2),
                            NoiseModel::biexponential_reference(),
                            NoiseModel::biexponential_reference().with_variance(1.0)}) {
    for (int m = 1; m <= 8; ++m) {
      worst_delta = std::max(worst_delta, rel(noise.delta(m), oracle::quad_delta(noise, m)));
    }
  }
  if (!(worst_delta < 1e-8)) {
    o.fail("Delta vs quadrature " + fmt(worst_delta));
  }

  // Poisson closed forms vs series / root finding / quadrature
  double worst_poisson = 0.0;
  for (double mu : {0.01, 0.5, 1.0, 2.0}) {
    const auto model = GeneratingModel::poisson(mu);
    for (int i = 1; i < 20; ++i) {
      const double u = i / 20.0;
      worst_poisson = std::max({worst_poisson, rel(generating_function(model, u), oracle::series_M(mu, u)),
                                rel(generating_inverse(model, u), oracle::root_Minv(mu, u)),
                                rel(pileup_weight(model, u), oracle::generic_weight(mu, u))});
    }
    const auto p = weight_profile(model);
    worst_poisson = std::max({worst_poisson, rel(p.W, oracle::quad_W(mu)),
                              rel(p.c_w, oracle::chain_rule_c_w(mu))});
  }
  if (!(worst_poisson < 1e-10)) {
    o.fail("Poisson closed forms " + fmt(worst_poisson));
  }
  o.detail << (o.ok ? "" : " |") << " fft " << fmt(worst_fft, 2) << ", trig mismatches "
           << mismatches << "/20, delta " << fmt(worst_delta, 2) << ", poisson "
           << fmt(worst_poisson, 2);
  return o;
}

// ---- 5: invariants -------------------------------------------------------

bool bitwise_equal(const MISEReport& a, const MISEReport& b)
{
  return a.per_replicate_ise.size() == b.per_replicate_ise.size() &&
         std::memcmp(a.per_replicate_ise.data(), b.per_replicate_ise.data(),
                     a.per_replicate_ise.size() * sizeof(double)) == 0 &&
         a.selected_models == b.selected_models &&
         std::memcmp(&a.mean_mise, &b.mean_mise, sizeof(double)) == 0 &&
         std::memcmp(&a.sd_mise, &b.sd_mise, sizeof(double)) == 0;
}

Outcome criterion5()
{
  Outcome o;
  // orthonormality by the midpoint rule (exact for these degrees)
  {
    const int m = 8;
    const int N = 4096;
    const int d = 2 * m + 1;
    std::vector<double> gram(std::size_t(d * d), 0.0);
    for (int i = 0; i < N; ++i) {
      const auto b = trig_basis(m, (i + 0.5) / N);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          gram[std::size_t(r * d + c)] += b[r] * b[c] / N;
        }
      }
    }
    double worst = 0.0;
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        worst = std::max(worst, std::abs(gram[std::size_t(r * d + c)] - (r == c ? 1.0 : 0.0)));
      }
    }
    if (!(worst < 1e-8)) {
      o.fail("orthonormality " + fmt(worst));
    }
  }
  // CDF round trips
  {
    double worst = 0.0;
    for (double mu : {0.01, 0.5, 2.0, 5.0}) {
      const auto model = GeneratingModel::poisson(mu);
      for (int i = 0; i <= 1000; ++i) {
        const double v = i / 1000.0;
        worst = std::max({worst, std::abs(generating_function(model, generating_inverse(model, v)) - v),
                          std::abs(target_cdf_from_pileup(model, pileup_cdf(model, v)) - v)});
      }
    }
    if (!(worst < 1e-10)) {
      o.fail("CDF round trip " + fmt(worst));
    }
  }
  // E[Y] recovered by the weighted L-statistic
  for (double mu : {0.5, 2.0}) {
    const std::size_t n = 100000;
    const auto s =
      sample_pileup(TargetDistribution::exp3(), GeneratingModel::poisson(mu), std::nullopt, n, 77);
    double est = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = s.values()[i] * s.weights()[i];
      est += t;
      sq += t * t;
    }
    est /= double(n);
    const double se = std::sqrt((sq / double(n) - est * est) / double(n));
    if (!(std::abs(est - 3.0) < 4.0 * se)) {
      o.fail("moment identity mu=" + fmt(mu) + ": " + fmt(est) + " vs 3 (se " + fmt(se) + ")");
    }
  }
  // |f*| <= 1
  {
    const auto emp = NoiseModel::empirical(sample_noise(NoiseModel::exponential(1.0), 500, 3));
    for (const auto& noise : {NoiseModel::exponential(1.0).with_variance(0.2),
                              NoiseModel::biexponential_reference().with_variance(1.0), emp}) {
      for (double u = -300.0; u <= 300.0; u += 0.173) {
        if (std::abs(noise.ft(u)) > 1.0 + 1e-12) {
          o.fail("|f*| > 1 for " + noise.description() + " at u=" + fmt(u));
          break;
        }
      }
    }
  }
  // serial and parallel runs agree bitwise
  for (auto kind : {EstimatorKind::Trig, EstimatorKind::Sinc}) {
    SimulationConfig cfg;
    cfg.target = TargetDistribution::exp3();
    cfg.generating = GeneratingModel::poisson(1.0);
    cfg.n = 500;
    cfg.replicates = 8;
    cfg.estimator = kind;
    if (kind == EstimatorKind::Sinc) {
      cfg.noise = NoiseModel::exponential(1.0).with_variance(0.2);
    }
    if (!bitwise_equal(run_replicates(cfg, 1), run_replicates(cfg, 4))) {
      o.fail(std::string(kind == EstimatorKind::Trig ? "trig" : "sinc") +
             " serial/parallel differ");
    }
  }
  // empirical transform error ~ M^{-1/2}: 16x draws -> 4x smaller
  double ratio = 0.0;
  {
    const auto exact = NoiseModel::exponential(1.0);
    auto rms = [&](std::size_t M) {
      double total = 0.0;
      int count = 0;
      for (int r = 0; r < 40; ++r) {
        const auto emp = NoiseModel::empirical(sample_noise(exact, M, 5000 + r));
        for (double u : {0.5, 2.0, 5.0}) {
          total += std::norm(emp.ft(u) - exact.ft(u));
          ++count;
        }
      }
      return std::sqrt(total / count);
    };
    ratio = rms(500) / rms(8000);
    if (ratio < 3.0 || ratio > 5.333) {
      o.fail("M^-1/2 ratio " + fmt(ratio) + " outside [3, 5.33]");
    }
  }
  o.detail << (o.ok ? "" : " |") << " orthonormality, round trips, moment identity, |f*|<=1, "
           << "determinism, convergence ratio " << fmt(ratio, 3) << " (expect 4)";
  return o;
}

} // namespace

int main(int argc, char** argv)
{
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: pileup_acceptance [--only N]\n";
      return 2;
    }
  }
  if (only < 0 || only > 6) {
    std::cerr << "criteria are numbered 1 to 6\n";
    return 2;
  }
  Outcome (*const checks[])() = {criterion1, criterion2, criterion3,
                                 criterion4, criterion5, criterion6};
  bool all = true;
  for (int c = 1; c <= 6; ++c) {
    if (only && c != only) {
      continue;
    }
    Outcome o;
    try {
      o = checks[c - 1]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all &= o.ok;
    std::cout << "criterion " << c << ": " << (o.ok ? "PASS" : "FAIL") << " —" << o.detail.str()
              << std::endl;
  }
  return all ? 0 : 1;
}
