#pragma once

#include "pileup/generating_model.hpp"
#include "pileup/noise.hpp"
#include "pileup/sample.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pileup {

/*!
 * Deconvolution estimate on the sinc basis phi_{m,j}(x) = sqrt(m) sinc(mx - j).
 * coeffs[j + K] holds a_{m,j} for j = -K..K.
 */
struct SincEstimate
{
  int m = 1;
  int K = 0;
  int T = 0;
  std::vector<Complex> coeffs;
  std::size_t n = 0;
  double criterion = 0.0;
  std::vector<std::string> warnings;

  Complex coefficient(int j) const { return coeffs[std::size_t(j + K)]; }
};

//! (1/n) sum_k w_k e^{-i u Z_(k)}.
Complex weighted_ecf(const Sample& sample, double u);

//! sqrt(m) sin(pi (mx - j)) / (pi (mx - j)).
double sinc_basis(int m, int j, double x);

/*!
 * a_{m,j}, j = -K..K, from the inverse FFT of the T-vector
 * H_t = ecf(u_t) / f*_eta(u_t), u_t = pi m (2t/T - 1).
 *
 * Throws ConfigError when T is not a power of two or T < 2K + 2, and
 * NumericError when |f*_eta| underflows on the grid.
 */
std::vector<Complex> sinc_coefficients(const Sample& sample, const NoiseModel& noise, int m,
                                       int T, int K);

//! -sum |a_j|^2.
double sinc_contrast(std::span<const Complex> coeffs);

//! {1, ..., m_n} with m_n the largest m such that Delta(m) <= n (at least {1}).
std::vector<int> cutoff_collection(const NoiseModel& noise, std::size_t n,
                                   int riemann_points = NoiseModel::default_riemann_points);

//! min(n, ceil(m z_max) + 32).
int default_truncation(int m, double z_max, std::size_t n);

struct SincOptions
{
  double kappa_prime = 1.0;
  double kappa_pp = 0.001;
  //! Minimum FFT size; raised to the next power of two >= 2K + 2 when needed.
  int T = 4096;
  //! Fixed truncation; default_truncation() per m when empty.
  std::optional<int> K;
  int riemann_points = NoiseModel::default_riemann_points;
};

struct CutoffCandidate
{
  int m;
  double contrast;
  double penalty;
  double delta;
};

struct SincSelection
{
  SincEstimate estimate;
  std::vector<CutoffCandidate> candidates;
};

//! pen(m) = kappa' (W + kappa'' c_w^2 ln n) Delta(m) / n.
double sinc_penalty(const WeightProfile& profile, double kappa_prime, double kappa_pp,
                    std::size_t n, double delta);

SincSelection select_sinc_cutoff_path(const Sample& sample, const NoiseModel& noise,
                                      const WeightProfile& profile,
                                      const SincOptions& options = {});
SincEstimate select_sinc_cutoff(const Sample& sample, const NoiseModel& noise,
                                const WeightProfile& profile, const SincOptions& options = {});

//! Estimate at a fixed cutoff m.
SincEstimate fit_sinc(const Sample& sample, const NoiseModel& noise, int m,
                      const SincOptions& options = {});

//! sum_j a_j phi_{m,j}(x), complex (the imaginary part is residual).
Complex evaluate_sinc_complex(const SincEstimate& est, double x);
//! Real part of evaluate_sinc_complex; may be negative.
double evaluate_sinc(const SincEstimate& est, double x);
double evaluate_sinc_clipped(const SincEstimate& est, double x);

} // namespace pileup
