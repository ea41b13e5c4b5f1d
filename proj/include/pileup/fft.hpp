#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pileup {

//! Normalized inverse DFT: out_j = (1/T) sum_t in_t e^{+2 pi i j t / T}.
std::vector<std::complex<double>> inverse_fft(std::span<const std::complex<double>> in);

bool is_power_of_two(std::size_t n);

} // namespace pileup
