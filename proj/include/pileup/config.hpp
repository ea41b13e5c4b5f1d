#pragma once

#include "pileup/harness.hpp"
#include "pileup/serialization.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pileup {

/*!
 * Parses a noise flag: "exp:<theta>", "biexp:<alpha>,<beta>,<nu>,<tau>",
 * "biexp" (reference parameters) or "file:<path>" (empirical CSV). A given
 * sigma2 rescales parametric kinds to that variance.
 */
NoiseModel parse_noise_flag(const std::string& flag, std::optional<double> sigma2);

struct NoiseSetting
{
  std::optional<NoiseModel> model;
  double sigma2 = 0.0;
  std::size_t estimated_size = 0;
};

/*!
 * {"kind": "exp"|"biexp"|"file"|"none", "theta", "alpha", "beta", "nu",
 *  "tau", "path", "sigma2" | "sigma", "estimated_size"}
 */
NoiseSetting noise_from_json(const Json& j);

using Band = std::pair<double, double>;

struct BenchmarkBand
{
  std::optional<Band> mise100;
  std::optional<Band> mean_m;
};

struct BenchmarkEntry
{
  SimulationConfig config;
  BenchmarkBand band;
  //! n was not given and the default was used.
  bool n_assumed = false;
};

struct BenchmarkSpec
{
  std::string name;
  std::vector<BenchmarkEntry> entries;
};

//! {"name", "master_seed", "defaults": {...}, "configs": [{...}, ...]}
//! Each config key overrides the same key in "defaults".
BenchmarkSpec parse_benchmark_spec(const Json& j);
BenchmarkSpec load_benchmark_spec(const std::filesystem::path& path);

struct BandCheck
{
  bool ok = true;
  std::string detail;
};

BandCheck check_band(const BenchmarkBand& band, const MISEReport& report);

} // namespace pileup
