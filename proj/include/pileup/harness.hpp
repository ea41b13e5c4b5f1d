#pragma once

#include "pileup/generating_model.hpp"
#include "pileup/noise.hpp"
#include "pileup/sinc_estimator.hpp"
#include "pileup/targets.hpp"
#include "pileup/trig_estimator.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pileup {

//! Evaluation grid of `points` nodes on [lo, hi]: x = lo + (hi - lo) t^grading
//! for equispaced t in [0, 1]. grading > 1 clusters nodes near lo, for
//! densities that blow up there.
struct Grid
{
  double lo;
  double hi;
  std::size_t points;
  int grading = 1;
};

//! Trapezoidal integral of (estimate - truth)^2 in t, with the dx/dt factor.
//! On a graded grid the node at lo has zero weight and is skipped.
double ise(const std::function<double(double)>& estimate,
           const std::function<double(double)>& truth, const Grid& grid);

//! [0, q_0.999] of the target with `points` nodes; graded (t^4) when the
//! density is unbounded at 0.
Grid default_mise_grid(const TargetDistribution& target, std::size_t points = 2048);

enum class EstimatorKind
{
  Trig,
  Sinc
};

struct Ablation
{
  //! Replace the rank weights w(i/n) by i/n.
  bool no_pileup_correction = false;
  //! Fit the trigonometric estimator even when noise is present.
  bool no_deconvolution = false;
};

struct SimulationConfig
{
  std::string label;
  TargetDistribution target = TargetDistribution::gamma33();
  GeneratingModel generating = GeneratingModel::poisson(0.01);
  //! Measurement error added before the minimum (already scaled).
  std::optional<NoiseModel> noise;
  double sigma2 = 0.0;
  //! When positive, the estimator replaces the exact noise law by the
  //! empirical law of this many independent noise draws.
  std::size_t noise_sample_size = 0;
  std::size_t n = 1000;
  std::size_t replicates = 25;
  EstimatorKind estimator = EstimatorKind::Trig;
  double kappa = 0.5;
  SincOptions sinc;
  std::optional<Interval> interval;
  std::size_t grid_points = 2048;
  std::optional<Grid> grid;
  std::uint64_t master_seed = 20240601;
  Ablation ablation;

  void validate() const;
};

struct MISEReport
{
  std::string label;
  std::vector<double> per_replicate_ise;
  double mean_mise = 0.0;
  double sd_mise = 0.0;
  std::vector<int> selected_models;
  double mean_m = 0.0;
  double sd_m = 0.0;
  double runtime_seconds = 0.0;
  Grid grid{0.0, 1.0, 2};
};

struct ReplicateResult
{
  double ise;
  int selected_model;
};

//! One replicate with its own random streams; pure function of (config, r).
ReplicateResult run_replicate(const SimulationConfig& config, std::size_t replicate);

//! Runs all replicates (on `threads` workers, 0 = hardware concurrency) and
//! aggregates in replicate order, so results do not depend on threads.
MISEReport run_replicates(const SimulationConfig& config, unsigned threads = 0);

//! Mean and sample standard deviation with compensated summation.
std::pair<double, double> mean_and_sd(std::span<const double> values);

//! 100 x MISE cell: three decimals without the leading zero below 1,
//! otherwise three significant digits for the mean and two for the SD.
std::string format_mise_cell(double mean_mise, double sd_mise);

struct SummaryTable
{
  struct Row
  {
    std::string label;
    double mise100;
    double sd100;
    double mean_m;
    double sd_m;
    std::string cell;
  };
  std::vector<Row> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

SummaryTable summarize(std::span<const MISEReport> reports, std::span<const std::string> labels);

} // namespace pileup
