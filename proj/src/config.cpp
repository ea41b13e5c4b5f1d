#include "pileup/config.hpp"

#include "pileup/errors.hpp"
#include "pileup/sample.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pileup {

namespace {

double parse_number(std::string_view text, const std::string& context)
{
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("bad number '" + std::string(text) + "' in " + context);
  }
  return v;
}

std::vector<double> parse_list(std::string_view text, const std::string& context)
{
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number(text.substr(0, comma), context));
    if (comma == std::string_view::npos) {
      break;
    }
    text.remove_prefix(comma + 1);
  }
  return out;
}

NoiseModel rescaled(NoiseModel model, std::optional<double> sigma2)
{
  if (sigma2) {
    return model.with_variance(*sigma2);
  }
  return model;
}

Band band_from_json(const Json& j, const char* key)
{
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(std::string("band '") + key + "' must be [lo, hi]");
  }
  Band b{j[0].get<double>(), j[1].get<double>()};
  if (!(b.first <= b.second)) {
    throw ConfigError(std::string("band '") + key + "' has lo > hi");
  }
  return b;
}

BenchmarkEntry entry_from_json(const Json& j, std::uint64_t master_seed, std::size_t index)
{
  BenchmarkEntry entry;
  auto& c = entry.config;
  c.label = j.value("label", "config " + std::to_string(index));
  c.target = TargetDistribution::parse(j.value("target", std::string("gamma")));
  if (j.contains("masses")) {
    c.generating = GeneratingModel::tabulated(j.at("masses").get<std::vector<double>>());
  } else {
    c.generating = GeneratingModel::poisson(j.value("mu", 0.01));
  }
  const std::string estimator = j.value("estimator", std::string("trig"));
  if (estimator == "trig") {
    c.estimator = EstimatorKind::Trig;
  } else if (estimator == "sinc") {
    c.estimator = EstimatorKind::Sinc;
  } else {
    throw ConfigError("unknown estimator '" + estimator + "'");
  }
  if (j.contains("noise")) {
    NoiseSetting noise = noise_from_json(j.at("noise"));
    c.noise = noise.model;
    c.sigma2 = noise.sigma2;
    c.noise_sample_size = noise.estimated_size;
  }
  if (j.contains("n")) {
    const auto n = j.at("n").get<long long>();
    if (n < 2) {
      throw ConfigError("n must be at least 2 in '" + c.label + "'");
    }
    c.n = std::size_t(n);
  } else {
    c.n = c.estimator == EstimatorKind::Sinc ? 2000 : 1000;
    entry.n_assumed = true;
  }
  const auto replicates = j.value("replicates", 25LL);
  if (replicates < 1) {
    throw ConfigError("replicates must be at least 1 in '" + c.label + "'");
  }
  c.replicates = std::size_t(replicates);
  c.kappa = j.value("kappa", 0.5);
  c.sinc.kappa_prime = j.value("kappa_prime", 1.0);
  c.sinc.kappa_pp = j.value("kappa_pp", 0.001);
  c.sinc.T = j.value("T", 4096);
  if (j.contains("K")) {
    c.sinc.K = j.at("K").get<int>();
  }
  c.grid_points = j.value("grid_points", std::size_t(2048));
  c.master_seed = j.value("seed", master_seed);
  if (j.contains("ablation")) {
    for (const auto& flag : j.at("ablation")) {
      const auto name = flag.get<std::string>();
      if (name == "no-pileup") {
        c.ablation.no_pileup_correction = true;
      } else if (name == "no-deconv") {
        c.ablation.no_deconvolution = true;
      } else {
        throw ConfigError("unknown ablation '" + name + "'");
      }
    }
  }
  if (j.contains("band")) {
    const auto& b = j.at("band");
    if (b.contains("mise100")) {
      entry.band.mise100 = band_from_json(b.at("mise100"), "mise100");
    }
    if (b.contains("mean_m")) {
      entry.band.mean_m = band_from_json(b.at("mean_m"), "mean_m");
    }
  }
  c.validate();
  return entry;
}

} // namespace

NoiseModel parse_noise_flag(const std::string& flag, std::optional<double> sigma2)
{
  const auto colon = flag.find(':');
  const std::string kind = flag.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : flag.substr(colon + 1);
  if (kind == "exp") {
    const double theta = rest.empty() ? 1.0 : parse_number(rest, "--noise exp");
    return rescaled(NoiseModel::exponential(theta), sigma2);
  }
  if (kind == "biexp") {
    if (rest.empty()) {
      return rescaled(NoiseModel::biexponential_reference(), sigma2);
    }
    const auto p = parse_list(rest, "--noise biexp");
    if (p.size() != 4) {
      throw ConfigError("--noise biexp expects alpha,beta,nu,tau");
    }
    return rescaled(NoiseModel::biexponential(p[0], p[1], p[2], p[3]), sigma2);
  }
  if (kind == "file") {
    if (rest.empty()) {
      throw ConfigError("--noise file: needs a path");
    }
    return NoiseModel::empirical(read_values_csv(rest));
  }
  throw ConfigError("unknown noise spec '" + flag + "'");
}

NoiseSetting noise_from_json(const Json& j)
{
  NoiseSetting setting;
  const std::string kind = j.value("kind", std::string("exp"));
  std::optional<double> sigma2;
  if (j.contains("sigma2")) {
    sigma2 = j.at("sigma2").get<double>();
  } else if (j.contains("sigma")) {
    const double s = j.at("sigma").get<double>();
    sigma2 = s * s;
  }
  if (kind == "none") {
    return setting;
  }
  if (kind == "exp" || kind == "exponential") {
    setting.model = rescaled(NoiseModel::exponential(j.value("theta", 1.0)), sigma2);
  } else if (kind == "biexp") {
    setting.model = rescaled(NoiseModel::biexponential(j.value("alpha", 2.0), j.value("beta", 1.0),
                                                       j.value("nu", 1.0), j.value("tau", 2.0)),
                             sigma2);
  } else if (kind == "file") {
    setting.model = NoiseModel::empirical(read_values_csv(j.at("path").get<std::string>()));
  } else {
    throw ConfigError("unknown noise kind '" + kind + "'");
  }
  setting.sigma2 = setting.model->variance();
  setting.estimated_size = j.value("estimated_size", std::size_t(0));
  return setting;
}

BenchmarkSpec parse_benchmark_spec(const Json& j)
{
  try {
    BenchmarkSpec spec;
    spec.name = j.value("name", std::string("benchmark"));
    const auto master_seed = j.value("master_seed", std::uint64_t(20240601));
    if (!j.contains("configs") || !j.at("configs").is_array() || j.at("configs").empty()) {
      throw ConfigError("benchmark spec lists no configurations");
    }
    const Json defaults = j.value("defaults", Json::object());
    std::size_t index = 0;
    for (const auto& item : j.at("configs")) {
      Json merged = defaults;
      merged.update(item);
      spec.entries.push_back(entry_from_json(merged, master_seed, index++));
    }
    return spec;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed benchmark spec: ") + e.what());
  }
}

BenchmarkSpec load_benchmark_spec(const std::filesystem::path& path)
{
  std::ifstream is(path);
  if (!is) {
    throw InputError("cannot read benchmark spec '" + path.string() + "'");
  }
  Json j;
  try {
    j = Json::parse(is);
  } catch (const Json::exception& e) {
    throw ConfigError("benchmark spec '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_benchmark_spec(j);
}

BandCheck check_band(const BenchmarkBand& band, const MISEReport& report)
{
  BandCheck check;
  std::ostringstream os;
  os.imbue(std::locale::classic());
  if (band.mise100) {
    const double v = 100.0 * report.mean_mise;
    const bool ok = v >= band.mise100->first && v <= band.mise100->second;
    check.ok = check.ok && ok;
    os << "100xMISE " << v << (ok ? " in " : " outside ") << "[" << band.mise100->first << ", "
       << band.mise100->second << "]";
  }
  if (band.mean_m) {
    const bool ok = report.mean_m >= band.mean_m->first && report.mean_m <= band.mean_m->second;
    check.ok = check.ok && ok;
    if (band.mise100) {
      os << "; ";
    }
    os << "mean m " << report.mean_m << (ok ? " in " : " outside ") << "[" << band.mean_m->first
       << ", " << band.mean_m->second << "]";
  }
  check.detail = os.str();
  return check;
}

} // namespace pileup
