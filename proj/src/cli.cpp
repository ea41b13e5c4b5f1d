#include "pileup/cli.hpp"

#include "pileup/config.hpp"
#include "pileup/errors.hpp"
#include "pileup/harness.hpp"
#include "pileup/sample.hpp"
#include "pileup/serialization.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#ifndef PILEUP_BENCHMARK_DIR
#define PILEUP_BENCHMARK_DIR "benchmarks"
#endif

namespace pileup::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions
{
  double mu = 0.01;
  std::string noise;
  std::optional<double> sigma2;
  double kappa = 0.5;
  double kappa_prime = 1.0;
  double kappa_pp = 0.001;
  std::string interval;
  std::size_t grid = 2048;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<std::string> ablation;
};

struct EstimateOptions
{
  std::string input;
  int T = 4096;
  bool clip = false;
};

struct SimulateOptions
{
  std::string target = "gamma";
  long long n = 1000;
};

struct BenchmarkOptions
{
  std::string spec;
  unsigned threads = 0;
  long long replicates = 0;
};

void write_text(const fs::path& path, const std::string& text)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw InputError("cannot open '" + path.string() + "' for writing");
  }
  os << text;
  if (!os) {
    throw InputError("write to '" + path.string() + "' failed");
  }
}

std::string dump(const Json& j)
{
  return j.dump(2) + "\n";
}

Ablation parse_ablation(const std::vector<std::string>& flags)
{
  Ablation a;
  for (const auto& f : flags) {
    if (f == "no-pileup") {
      a.no_pileup_correction = true;
    } else if (f == "no-deconv") {
      a.no_deconvolution = true;
    } else {
      throw ConfigError("unknown ablation '" + f + "'");
    }
  }
  return a;
}

std::optional<Interval> parse_interval(const std::string& text)
{
  if (text.empty()) {
    return std::nullopt;
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("--interval expects lo:hi");
  }
  auto number = [&text](std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("bad --interval '" + text + "'");
    }
    return v;
  };
  const std::string_view view(text);
  Interval iv{number(view.substr(0, colon)), number(view.substr(colon + 1))};
  if (!(iv.hi > iv.lo)) {
    throw ConfigError("--interval needs lo < hi");
  }
  return iv;
}

std::string utc_timestamp()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int cmd_estimate(const CommonOptions& common, const EstimateOptions& opts, std::ostream& out,
                 std::ostream& err)
{
  const auto start = std::chrono::steady_clock::now();
  const Ablation ablation = parse_ablation(common.ablation);
  const GeneratingModel model = GeneratingModel::poisson(common.mu);
  if (common.grid < 2) {
    throw ConfigError("--grid needs at least 2 points");
  }

  auto observations = read_values_csv(opts.input);
  const std::size_t n = observations.size();
  std::vector<double> weights;
  if (ablation.no_pileup_correction) {
    for (std::size_t i = 0; i < n; ++i) {
      weights.push_back(double(i + 1) / double(n));
    }
  } else {
    weights = weight_table(model, n);
  }
  const Sample sample = Sample::with_rank_weights(std::move(observations), std::move(weights));
  const WeightProfile profile = weight_profile(model);

  std::optional<NoiseModel> noise;
  if (!common.noise.empty()) {
    noise = parse_noise_flag(common.noise, common.sigma2);
  }

  const std::string prefix = common.out.empty() ? std::string("estimate") : common.out;
  Json estimate_json;
  Json manifest{{"command", "estimate"},
                {"input", opts.input},
                {"mu", common.mu},
                {"n", n},
                {"ablation", common.ablation}};
  std::string grid_csv;
  std::vector<std::string> warnings;

  if (noise && !ablation.no_deconvolution) {
    SincOptions so;
    so.kappa_prime = common.kappa_prime;
    so.kappa_pp = common.kappa_pp;
    so.T = opts.T;
    const SincEstimate est = select_sinc_cutoff(sample, *noise, profile, so);
    warnings = est.warnings;
    estimate_json = to_json(est);
    const Grid grid{0.0, sample.max(), common.grid};
    grid_csv = density_grid_csv(
      [&](double x) { return opts.clip ? evaluate_sinc_clipped(est, x) : evaluate_sinc(est, x); },
      grid);
    manifest["basis"] = "sinc";
    manifest["selected_m"] = est.m;
    manifest["dropped"] = 0;
    manifest["constants"] = {{"kappa_prime", so.kappa_prime},
                             {"kappa_pp", so.kappa_pp},
                             {"T", est.T},
                             {"K", est.K},
                             {"W", profile.W},
                             {"c_w", profile.c_w}};
    manifest["noise"] = noise->description();
    out << "basis=sinc m=" << est.m << " K=" << est.K << " T=" << est.T << " n=" << n << "\n";
  } else {
    const TrigEstimate est =
      select_trig_model(sample, parse_interval(common.interval), common.kappa, profile.W);
    estimate_json = to_json(est);
    const Grid grid{est.interval.lo, est.interval.hi, common.grid};
    grid_csv = density_grid_csv(
      [&](double x) { return opts.clip ? evaluate_trig_clipped(est, x) : evaluate_trig(est, x); },
      grid);
    manifest["basis"] = "trig";
    manifest["selected_m"] = est.m;
    manifest["dropped"] = est.dropped;
    manifest["constants"] = {{"kappa", common.kappa}, {"W", profile.W}};
    manifest["interval"] = {est.interval.lo, est.interval.hi};
    out << "basis=trig m=" << est.m << " n=" << n << " dropped=" << est.dropped << "\n";
  }

  for (const auto& w : warnings) {
    err << "warning: " << w << "\n";
  }
  manifest["warnings"] = warnings;
  manifest["outputs"] = {prefix + ".json", prefix + ".grid.csv"};
  manifest["wall_seconds"] =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest["timestamp"] = utc_timestamp();

  write_text(prefix + ".json", dump(estimate_json));
  write_text(prefix + ".grid.csv", grid_csv);
  write_text(prefix + ".manifest.json", dump(manifest));
  return success;
}

int cmd_simulate(const CommonOptions& common, const SimulateOptions& opts, std::ostream& out)
{
  if (opts.n < 1) {
    throw ConfigError("--n must be at least 1");
  }
  const TargetDistribution target = TargetDistribution::parse(opts.target);
  const GeneratingModel model = GeneratingModel::poisson(common.mu);
  std::optional<NoiseModel> noise;
  if (!common.noise.empty()) {
    noise = parse_noise_flag(common.noise, common.sigma2);
  }
  RandomStream rng(common.seed);
  const auto values =
    draw_pileup_values(target, model, noise ? &*noise : nullptr, std::size_t(opts.n), rng);
  const std::string path = common.out.empty() ? std::string("sample.csv") : common.out;
  write_text(path, format_values_csv(values));
  out << "wrote " << values.size() << " observations to " << path << "\n";
  return success;
}

fs::path resolve_spec(const std::string& spec)
{
  if (fs::exists(spec)) {
    return spec;
  }
  const fs::path bundled = fs::path(PILEUP_BENCHMARK_DIR) / (spec + ".json");
  if (fs::exists(bundled)) {
    return bundled;
  }
  throw InputError("benchmark spec '" + spec + "' not found");
}

int cmd_benchmark(const CommonOptions& common, const BenchmarkOptions& opts, std::ostream& out,
                  std::ostream& err)
{
  BenchmarkSpec spec = load_benchmark_spec(resolve_spec(opts.spec));
  if (opts.replicates > 0) {
    for (auto& e : spec.entries) {
      e.config.replicates = std::size_t(opts.replicates);
    }
  }

  std::vector<MISEReport> reports;
  Json entries = Json::array();
  bool all_ok = true;
  for (const auto& entry : spec.entries) {
    MISEReport report = run_replicates(entry.config, opts.threads);
    const BandCheck check = check_band(entry.band, report);
    all_ok = all_ok && check.ok;
    Json j = to_json(report);
    j["runtime_seconds"] = nullptr; // timing lives in the manifest only
    j["config"] = {{"target", entry.config.target.name()},
                   {"mu", entry.config.generating.is_poisson() ? entry.config.generating.mu() : 0.0},
                   {"n", entry.config.n},
                   {"n_assumed", entry.n_assumed},
                   {"replicates", entry.config.replicates},
                   {"estimator", entry.config.estimator == EstimatorKind::Trig ? "trig" : "sinc"},
                   {"noise", entry.config.noise ? entry.config.noise->description() : "none"},
                   {"sigma2", entry.config.sigma2},
                   {"noise_sample_size", entry.config.noise_sample_size},
                   {"master_seed", entry.config.master_seed}};
    j["band_ok"] = check.ok;
    j["band_detail"] = check.detail;
    entries.push_back(std::move(j));
    if (!check.ok) {
      err << "band violated for '" << report.label << "': " << check.detail << "\n";
    }
    reports.push_back(std::move(report));
  }

  const SummaryTable table = summarize(reports, {});
  out << table.to_text();

  const std::string prefix = common.out.empty() ? spec.name : common.out;
  write_text(prefix + ".csv", table.to_csv());
  write_text(prefix + ".json", dump(Json{{"name", spec.name}, {"reports", entries}, {"ok", all_ok}}));
  Json timing = Json::array();
  for (const auto& r : reports) {
    timing.push_back({{"label", r.label}, {"runtime_seconds", r.runtime_seconds}});
  }
  write_text(prefix + ".manifest.json",
             dump(Json{{"command", "benchmark"}, {"spec", opts.spec}, {"timing", timing},
                       {"timestamp", utc_timestamp()}}));
  return all_ok ? success : band_failure;
}

void add_common(CLI::App& app, CommonOptions& c, bool estimation)
{
  app.add_option("--mu", c.mu, "Poisson parameter of the photon count")->capture_default_str();
  app.add_option("--noise", c.noise, "exp:theta | biexp:a,b,nu,tau | file:path");
  app.add_option("--sigma2", c.sigma2, "rescale parametric noise to this variance");
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--out", c.out, "output path or prefix");
  if (estimation) {
    app.add_option("--kappa", c.kappa, "trig penalty constant")->capture_default_str();
    app.add_option("--kappa-prime", c.kappa_prime, "sinc penalty constant")->capture_default_str();
    app.add_option("--kappa-pp", c.kappa_pp, "sinc log-term constant")->capture_default_str();
    app.add_option("--interval", c.interval, "trig estimation interval lo:hi");
    app.add_option("--grid", c.grid, "density grid points")->capture_default_str();
    app.add_option("--ablation", c.ablation, "no-pileup | no-deconv");
  }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Adaptive density estimation from pile-up observations", "pileup"};
  app.require_subcommand(1);

  CommonOptions estimate_common, simulate_common, benchmark_common;
  EstimateOptions estimate_opts;
  SimulateOptions simulate_opts;
  BenchmarkOptions benchmark_opts;

  auto* estimate = app.add_subcommand("estimate", "estimate a target density from a sample CSV");
  estimate->add_option("--input", estimate_opts.input, "sample CSV")->required();
  estimate->add_option("--fft-size", estimate_opts.T, "minimum FFT size")->capture_default_str();
  estimate->add_flag("--clip", estimate_opts.clip, "clip negative density values in the grid");
  add_common(*estimate, estimate_common, true);

  auto* simulate = app.add_subcommand("simulate", "write a synthetic pile-up sample");
  simulate->add_option("--target", simulate_opts.target, "gamma|exp|pareto|weibull|exp:rate")
    ->capture_default_str();
  simulate->add_option("--n", simulate_opts.n, "sample size")->capture_default_str();
  add_common(*simulate, simulate_common, false);

  auto* benchmark = app.add_subcommand("benchmark", "run a MISE benchmark suite");
  benchmark->add_option("--spec", benchmark_opts.spec, "spec JSON or bundled name")->required();
  benchmark->add_option("--threads", benchmark_opts.threads, "worker threads (0 = all)");
  benchmark->add_option("--replicates", benchmark_opts.replicates, "override replicate counts");
  benchmark->add_option("--out", benchmark_common.out, "output prefix");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return success;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  try {
    if (estimate->parsed()) {
      return cmd_estimate(estimate_common, estimate_opts, out, err);
    }
    if (simulate->parsed()) {
      return cmd_simulate(simulate_common, simulate_opts, out);
    }
    return cmd_benchmark(benchmark_common, benchmark_opts, out, err);
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return numeric_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
}

} // namespace pileup::cli
