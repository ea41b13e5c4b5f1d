#include "pileup/sample.hpp"

#include "pileup/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace pileup {

Sample Sample::from_observations(std::vector<double> observations, const GeneratingModel& model)
{
  if (observations.empty()) {
    throw DomainError("empty sample");
  }
  auto weights = weight_table(model, observations.size());
  return with_rank_weights(std::move(observations), std::move(weights));
}

Sample Sample::with_rank_weights(std::vector<double> observations,
                                 std::vector<double> rank_weights)
{
  if (observations.empty()) {
    throw DomainError("empty sample");
  }
  if (observations.size() != rank_weights.size()) {
    throw DomainError("rank weights must match the sample size");
  }
  for (double v : observations) {
    if (!std::isfinite(v)) {
      throw DomainError("sample values must be finite");
    }
  }
  std::stable_sort(observations.begin(), observations.end());
  return Sample(std::move(observations), std::move(rank_weights));
}

std::size_t draw_count(const GeneratingModel& model, RandomStream& rng)
{
  const double u = rng.uniform_open();
  if (model.is_poisson()) {
    // Inversion over the truncated masses p_1 = mu/(e^mu - 1),
    // p_{k+1} = p_k mu/(k+1).
    const double mu = model.mu();
    double p = mu / std::expm1(mu);
    double cumulative = p;
    std::size_t k = 1;
    while (u > cumulative) {
      p *= mu / double(k + 1);
      ++k;
      if (p < 1e-300 && cumulative > 1.0 - 1e-15) {
        break;
      }
      cumulative += p;
    }
    return k;
  }
  const auto masses = model.masses();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    cumulative += masses[k];
    if (u <= cumulative) {
      return k + 1;
    }
  }
  // Masses sum to 1 within 1e-12; u beyond the rounded total falls here.
  std::size_t last = masses.size();
  while (last > 1 && masses[last - 1] == 0.0) {
    --last;
  }
  return last;
}

std::size_t sample_truncated_count(const GeneratingModel& model, std::uint64_t seed)
{
  RandomStream rng(seed);
  return draw_count(model, rng);
}

double draw_pileup(const TargetDistribution& dist, const GeneratingModel& model,
                   const NoiseModel* noise, RandomStream& rng)
{
  const std::size_t count = draw_count(model, rng);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count; ++j) {
    double x = dist.draw(rng);
    if (noise != nullptr) {
      x += noise->draw(rng);
    }
    best = std::min(best, x);
  }
  return best;
}

std::vector<double> draw_pileup_values(const TargetDistribution& dist,
                                       const GeneratingModel& model, const NoiseModel* noise,
                                       std::size_t n, RandomStream& rng)
{
  if (n == 0) {
    throw DomainError("sample size must be at least 1");
  }
  std::vector<double> out(n);
  for (auto& z : out) {
    z = draw_pileup(dist, model, noise, rng);
  }
  return out;
}

Sample sample_pileup(const TargetDistribution& dist, const GeneratingModel& model,
                     const std::optional<NoiseModel>& noise, std::size_t n, std::uint64_t seed)
{
  RandomStream rng(seed);
  auto values = draw_pileup_values(dist, model, noise ? &*noise : nullptr, n, rng);
  return Sample::from_observations(std::move(values), model);
}

double ecdf(const Sample& sample, double z)
{
  const auto values = sample.values();
  const auto it = std::upper_bound(values.begin(), values.end(), z);
  return double(it - values.begin()) / double(values.size());
}

std::string format_double(double value)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_values_csv(std::span<const double> values)
{
  std::string out;
  out.reserve(values.size() * 20);
  for (double v : values) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

void write_values_csv(const std::filesystem::path& path, std::span<const double> values)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw InputError("cannot open '" + path.string() + "' for writing");
  }
  os << format_values_csv(values);
  if (!os) {
    throw InputError("write to '" + path.string() + "' failed");
  }
}

std::vector<double> parse_values_csv(const std::string& text, const CsvReadOptions& options)
{
  std::vector<double> values;
  std::size_t line_number = 0;
  std::size_t nonpositive = 0;
  std::size_t first_nonpositive = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) {
      end = text.size();
    }
    ++line_number;
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    double v = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    if (*first == '+') {
      ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw InputError("line " + std::to_string(line_number) + ": not a number: '" +
                       std::string(line) + "'");
    }
    if (options.require_positive && !(v > 0.0)) {
      if (nonpositive++ == 0) {
        first_nonpositive = line_number;
      }
      continue;
    }
    values.push_back(v);
  }
  if (nonpositive > 0) {
    throw InputError(std::to_string(nonpositive) + " nonpositive value(s), first on line " +
                     std::to_string(first_nonpositive));
  }
  if (values.empty()) {
    throw InputError("empty sample");
  }
  return values;
}

std::vector<double> read_values_csv(const std::filesystem::path& path,
                                    const CsvReadOptions& options)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw InputError("cannot read '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_values_csv(buffer.str(), options);
}

} // namespace pileup
