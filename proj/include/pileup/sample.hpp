#pragma once

#include "pileup/generating_model.hpp"
#include "pileup/noise.hpp"
#include "pileup/random.hpp"
#include "pileup/targets.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pileup {

/*!
 * Order statistics Z_(1) <= ... <= Z_(n) of a pile-up sample together with
 * the rank weights applied to them (normally w(i/n)).
 */
class Sample
{
public:
  //! Sorts the observations (stable, so tied values keep input order) and
  //! attaches w(i/n) from the generating model.
  static Sample from_observations(std::vector<double> observations,
                                  const GeneratingModel& model);
  //! Sorts the observations and attaches caller-supplied rank weights.
  static Sample with_rank_weights(std::vector<double> observations,
                                  std::vector<double> rank_weights);

  std::span<const double> values() const { return values_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

private:
  Sample(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values))
    , weights_(std::move(weights))
  {}

  std::vector<double> values_;
  std::vector<double> weights_;
};

//! N >= 1 drawn from the count law of model.
std::size_t draw_count(const GeneratingModel& model, RandomStream& rng);
std::size_t sample_truncated_count(const GeneratingModel& model, std::uint64_t seed);

//! One observation min_{j<=N} (Y_j + eta_j).
double draw_pileup(const TargetDistribution& dist, const GeneratingModel& model,
                   const NoiseModel* noise, RandomStream& rng);

std::vector<double> draw_pileup_values(const TargetDistribution& dist,
                                       const GeneratingModel& model, const NoiseModel* noise,
                                       std::size_t n, RandomStream& rng);

Sample sample_pileup(const TargetDistribution& dist, const GeneratingModel& model,
                     const std::optional<NoiseModel>& noise, std::size_t n, std::uint64_t seed);

//! Empirical CDF #{Z_i <= z} / n.
double ecdf(const Sample& sample, double z);

//! One value per line, shortest round-trip decimal, LF endings.
void write_values_csv(const std::filesystem::path& path, std::span<const double> values);
std::string format_values_csv(std::span<const double> values);

struct CsvReadOptions
{
  bool require_positive = true;
};

//! Parses one decimal per line. Throws InputError naming the first bad line;
//! with require_positive, nonpositive values are rejected with their count.
std::vector<double> parse_values_csv(const std::string& text, const CsvReadOptions& options = {});
std::vector<double> read_values_csv(const std::filesystem::path& path,
                                    const CsvReadOptions& options = {});

//! Shortest round-trip decimal representation, locale independent.
std::string format_double(double value);

} // namespace pileup
