#include "pileup/fft.hpp"

#include "pileup/errors.hpp"

#include <fftw3.h>
#include <memory>
#include <mutex>

namespace pileup {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex()
{
  static std::mutex m;
  return m;
}

struct PlanDeleter
{
  void operator()(fftw_plan_s* p) const
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

} // namespace

bool is_power_of_two(std::size_t n)
{
  return n != 0 && (n & (n - 1)) == 0;
}

std::vector<std::complex<double>> inverse_fft(std::span<const std::complex<double>> in)
{
  const std::size_t T = in.size();
  if (T == 0) {
    return {};
  }
  std::vector<std::complex<double>> data(in.begin(), in.end());
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
    plan.reset(fftw_plan_dft_1d(int(T), buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  if (!plan) {
    throw NumericError("FFTW could not create an inverse plan");
  }
  fftw_execute(plan.get());
  const double scale = 1.0 / double(T);
  for (auto& z : data) {
    z *= scale;
  }
  return data;
}

} // namespace pileup
