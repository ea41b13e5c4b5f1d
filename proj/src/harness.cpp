#include "pileup/harness.hpp"

#include "pileup/errors.hpp"
#include "pileup/sample.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

namespace pileup {

namespace {

// Neumaier's compensated sum.
double compensated_sum(std::span<const double> values)
{
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

ReplicateResult run_replicate_with(const SimulationConfig& config, const WeightProfile& profile,
                                   const Grid& grid, std::size_t replicate)
{
  RandomStream rng = RandomStream::for_replicate(config.master_seed, replicate, 0);
  const NoiseModel* noise = config.noise ? &*config.noise : nullptr;
  auto values = draw_pileup_values(config.target, config.generating, noise, config.n, rng);

  std::vector<double> weights;
  if (config.ablation.no_pileup_correction) {
    weights.resize(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
      weights[i] = double(i + 1) / double(config.n);
    }
  } else {
    weights = weight_table(config.generating, config.n);
  }
  const Sample sample = Sample::with_rank_weights(std::move(values), std::move(weights));
  auto truth = [&config](double x) { return config.target.pdf(x); };

  const bool deconvolve = config.estimator == EstimatorKind::Sinc && noise != nullptr &&
                          !config.ablation.no_deconvolution;
  if (deconvolve) {
    NoiseModel working = *noise;
    if (config.noise_sample_size > 0) {
      RandomStream noise_rng = RandomStream::for_replicate(config.master_seed, replicate, 1);
      std::vector<double> draws(config.noise_sample_size);
      for (auto& v : draws) {
        v = noise->draw(noise_rng);
      }
      working = NoiseModel::empirical(std::move(draws));
    }
    const SincEstimate est = select_sinc_cutoff(sample, working, profile, config.sinc);
    return {ise([&est](double x) { return evaluate_sinc(est, x); }, truth, grid), est.m};
  }

  const TrigEstimate est = select_trig_model(sample, config.interval, config.kappa, profile.W);
  return {ise([&est](double x) { return evaluate_trig(est, x); }, truth, grid), est.m};
}

[[noreturn]] void rethrow_with_context(std::exception_ptr error, std::size_t replicate,
                                       std::uint64_t seed)
{
  const std::string prefix = "replicate " + std::to_string(replicate) + " (stream seed " +
                             std::to_string(seed) + ") failed: ";
  try {
    std::rethrow_exception(error);
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

} // namespace

double ise(const std::function<double(double)>& estimate,
           const std::function<double(double)>& truth, const Grid& grid)
{
  if (grid.points < 2 || !(grid.hi > grid.lo) || grid.grading < 1) {
    throw DomainError("ISE grid needs at least 2 points, hi > lo and grading >= 1");
  }
  const double len = grid.hi - grid.lo;
  const double h = 1.0 / double(grid.points - 1);
  const int p = grid.grading;
  std::vector<double> terms(grid.points);
  for (std::size_t i = (p > 1 ? 1 : 0); i < grid.points; ++i) {
    const double t = (i + 1 == grid.points) ? 1.0 : double(i) * h;
    const double x = (i + 1 == grid.points) ? grid.hi : grid.lo + len * std::pow(t, p);
    const double d = estimate(x) - truth(x);
    if (!std::isfinite(d)) {
      throw NumericError("non-finite integrand in ISE at x = " + std::to_string(x));
    }
    const double jacobian = p * len * std::pow(t, p - 1);
    terms[i] = d * d * jacobian * ((i == 0 || i + 1 == grid.points) ? 0.5 * h : h);
  }
  return compensated_sum(terms);
}

Grid default_mise_grid(const TargetDistribution& target, std::size_t points)
{
  const double hi = target.quantile(0.999);
  const int grading = std::isfinite(target.pdf(0.0)) ? 1 : 4;
  return {0.0, hi, points, grading};
}

void SimulationConfig::validate() const
{
  if (replicates < 1) {
    throw ConfigError("replicates must be at least 1");
  }
  if (n < 2) {
    throw ConfigError("sample size n must be at least 2");
  }
  if (noise && !noise->is_none() && !(noise->variance() > 0.0)) {
    throw ConfigError("noise variance sigma2 must be positive");
  }
  if (grid_points < 2) {
    throw ConfigError("grid needs at least 2 points");
  }
  if (!(kappa > 0.0)) {
    throw ConfigError("kappa must be positive");
  }
  if (estimator == EstimatorKind::Sinc && !noise && !ablation.no_deconvolution) {
    throw ConfigError("the sinc estimator needs a noise model");
  }
}

ReplicateResult run_replicate(const SimulationConfig& config, std::size_t replicate)
{
  config.validate();
  const WeightProfile profile = weight_profile(config.generating);
  const Grid grid = config.grid.value_or(default_mise_grid(config.target, config.grid_points));
  return run_replicate_with(config, profile, grid, replicate);
}

MISEReport run_replicates(const SimulationConfig& config, unsigned threads)
{
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const WeightProfile profile = weight_profile(config.generating);
  const Grid grid = config.grid.value_or(default_mise_grid(config.target, config.grid_points));

  const std::size_t R = config.replicates;
  std::vector<ReplicateResult> results(R);
  std::vector<std::exception_ptr> errors(R);

  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = unsigned(std::min<std::size_t>(threads, R));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < R; r = next.fetch_add(1)) {
      try {
        results[r] = run_replicate_with(config, profile, grid, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    if (errors[r]) {
      rethrow_with_context(errors[r], r, stream_seed(config.master_seed, r));
    }
  }

  MISEReport report;
  report.label = config.label;
  report.grid = grid;
  std::vector<double> ms(R);
  for (std::size_t r = 0; r < R; ++r) {
    report.per_replicate_ise.push_back(results[r].ise);
    report.selected_models.push_back(results[r].selected_model);
    ms[r] = results[r].selected_model;
  }
  std::tie(report.mean_mise, report.sd_mise) = mean_and_sd(report.per_replicate_ise);
  std::tie(report.mean_m, report.sd_m) = mean_and_sd(ms);
  report.runtime_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::pair<double, double> mean_and_sd(std::span<const double> values)
{
  if (values.empty()) {
    return {0.0, 0.0};
  }
  const double n = double(values.size());
  const double mean = compensated_sum(values) / n;
  if (values.size() == 1) {
    return {mean, 0.0};
  }
  std::vector<double> squares(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    squares[i] = (values[i] - mean) * (values[i] - mean);
  }
  return {mean, std::sqrt(compensated_sum(squares) / (n - 1.0))};
}

namespace {

std::string fixed(double v, int decimals)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", std::max(decimals, 0), v);
  return buf;
}

std::string significant(double v, int digits)
{
  if (v == 0.0 || !std::isfinite(v)) {
    return fixed(v, digits - 1);
  }
  const int magnitude = int(std::floor(std::log10(std::abs(v))));
  return fixed(v, digits - 1 - magnitude);
}

std::string drop_leading_zero(std::string s)
{
  if (s.rfind("0.", 0) == 0) {
    s.erase(0, 1);
  }
  return s;
}

std::string csv_escape(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

} // namespace

std::string format_mise_cell(double mean_mise, double sd_mise)
{
  const double mean100 = 100.0 * mean_mise;
  const double sd100 = 100.0 * sd_mise;
  if (std::abs(mean100) < 1.0) {
    return drop_leading_zero(fixed(mean100, 3)) + " (" + drop_leading_zero(fixed(sd100, 3)) + ")";
  }
  return significant(mean100, 3) + " (" + significant(sd100, 2) + ")";
}

SummaryTable summarize(std::span<const MISEReport> reports, std::span<const std::string> labels)
{
  if (reports.empty()) {
    throw ConfigError("summarize needs at least one report");
  }
  if (!labels.empty() && labels.size() != reports.size()) {
    throw ConfigError("labels and reports differ in count");
  }
  SummaryTable table;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    table.rows.push_back({labels.empty() ? r.label : labels[i], 100.0 * r.mean_mise,
                          100.0 * r.sd_mise, r.mean_m, r.sd_m,
                          format_mise_cell(r.mean_mise, r.sd_mise)});
  }
  return table;
}

std::string SummaryTable::to_csv() const
{
  std::string out = "label,mise100,sd100,mean_m,sd_m,cell\n";
  for (const auto& row : rows) {
    out += csv_escape(row.label) + "," + format_double(row.mise100) + "," +
           format_double(row.sd100) + "," + format_double(row.mean_m) + "," +
           format_double(row.sd_m) + "," + csv_escape(row.cell) + "\n";
  }
  return out;
}

std::string SummaryTable::to_text() const
{
  std::size_t width = 5;
  for (const auto& row : rows) {
    width = std::max(width, row.label.size());
  }
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::left << std::setw(int(width)) << "label" << "  " << std::setw(18)
     << "100 x MISE (sd)" << "  " << "m (sd)\n";
  for (const auto& row : rows) {
    os << std::left << std::setw(int(width)) << row.label << "  " << std::setw(18) << row.cell
       << "  " << significant(row.mean_m, 3) << " (" << significant(row.sd_m, 2) << ")\n";
  }
  return os.str();
}

} // namespace pileup
