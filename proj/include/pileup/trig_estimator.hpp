#pragma once

#include "pileup/sample.hpp"

#include <optional>
#include <span>
#include <vector>

namespace pileup {

struct Interval
{
  double lo;
  double hi;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/*!
 * Projection estimate on the trigonometric basis of an interval, after the
 * affine map of the interval onto [0, 1]. Coefficients are ordered
 * a_0, a_{1,cos}, a_{1,sin}, ..., a_{m,cos}, a_{m,sin}.
 */
struct TrigEstimate
{
  int m = 0;
  std::vector<double> coeffs;
  Interval interval{0.0, 1.0};
  std::size_t n = 0;
  std::size_t dropped = 0;
  double criterion = 0.0;
};

//! [1, sqrt2 cos(2 pi x), sqrt2 sin(2 pi x), ..., sqrt2 sin(2 pi m x)].
std::vector<double> trig_basis(int m, double x);

struct TrigFit
{
  std::vector<double> coeffs;
  std::size_t dropped = 0;
};

//! a_lambda = (1/n) sum_i phi_lambda((Z_(i) - lo)/(hi - lo)) w_i over the
//! observations inside the interval; the rest are counted as dropped.
TrigFit fit_trig_coefficients(const Sample& sample, const Interval& interval, int m);

//! Empirical contrast of the fitted projection, -sum a^2.
double trig_contrast(std::span<const double> coeffs);

//! (0, max Z (1 + 1/n)).
Interval default_trig_interval(const Sample& sample);

//! Largest frequency of the model collection, max(0, floor(n/2) - 1).
int max_trig_frequency(std::size_t n);

struct TrigSelection
{
  TrigEstimate estimate;
  //! criterion[m] = -sum_{lambda in Lambda_m} a^2 + kappa W (2m+1)/n.
  std::vector<double> criteria;
};

//! Penalized selection of m over 0..max_trig_frequency(n), via the
//! running-sum recursion over frequencies. Ties go to the smaller m.
TrigSelection select_trig_model_path(const Sample& sample, std::optional<Interval> interval,
                                     double kappa, double W);
TrigEstimate select_trig_model(const Sample& sample, std::optional<Interval> interval,
                               double kappa, double W);

//! Density on the original scale; 0 outside the interval. May be negative.
double evaluate_trig(const TrigEstimate& est, double x);
double evaluate_trig_clipped(const TrigEstimate& est, double x);

} // namespace pileup
