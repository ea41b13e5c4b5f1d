#include "pileup/serialization.hpp"

#include "pileup/errors.hpp"
#include "pileup/sample.hpp"

namespace pileup {

Json to_json(const TrigEstimate& est)
{
  return Json{{"basis", "trig"},
              {"m", est.m},
              {"interval", {est.interval.lo, est.interval.hi}},
              {"coeffs", est.coeffs},
              {"n", est.n},
              {"dropped", est.dropped}};
}

Json to_json(const SincEstimate& est)
{
  Json coeffs = Json::array();
  for (const auto& a : est.coeffs) {
    coeffs.push_back({a.real(), a.imag()});
  }
  return Json{{"basis", "sinc"}, {"m", est.m}, {"K", est.K},
              {"T", est.T},      {"coeffs", std::move(coeffs)}, {"n", est.n}};
}

TrigEstimate trig_estimate_from_json(const Json& j)
{
  try {
    if (j.at("basis") != "trig") {
      throw InputError("estimate basis is not 'trig'");
    }
    TrigEstimate est;
    est.m = j.at("m").get<int>();
    est.interval = {j.at("interval").at(0).get<double>(), j.at("interval").at(1).get<double>()};
    est.coeffs = j.at("coeffs").get<std::vector<double>>();
    est.n = j.at("n").get<std::size_t>();
    est.dropped = j.at("dropped").get<std::size_t>();
    if (est.coeffs.size() != 2 * std::size_t(est.m) + 1 || !(est.interval.hi > est.interval.lo)) {
      throw InputError("inconsistent trig estimate");
    }
    return est;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed trig estimate: ") + e.what());
  }
}

SincEstimate sinc_estimate_from_json(const Json& j)
{
  try {
    if (j.at("basis") != "sinc") {
      throw InputError("estimate basis is not 'sinc'");
    }
    SincEstimate est;
    est.m = j.at("m").get<int>();
    est.K = j.at("K").get<int>();
    est.T = j.at("T").get<int>();
    est.n = j.at("n").get<std::size_t>();
    for (const auto& pair : j.at("coeffs")) {
      est.coeffs.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    if (est.coeffs.size() != 2 * std::size_t(est.K) + 1) {
      throw InputError("inconsistent sinc estimate");
    }
    return est;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed sinc estimate: ") + e.what());
  }
}

Json to_json(const MISEReport& report)
{
  return Json{{"label", report.label},
              {"per_replicate_ise", report.per_replicate_ise},
              {"mean_mise", report.mean_mise},
              {"sd_mise", report.sd_mise},
              {"mise100", 100.0 * report.mean_mise},
              {"sd100", 100.0 * report.sd_mise},
              {"selected_models", report.selected_models},
              {"mean_m", report.mean_m},
              {"sd_m", report.sd_m},
              {"runtime_seconds", report.runtime_seconds},
              {"grid", {{"lo", report.grid.lo}, {"hi", report.grid.hi}, {"points", report.grid.points}, {"grading", report.grid.grading}}}};
}

std::string density_grid_csv(const std::function<double(double)>& density, const Grid& grid)
{
  if (grid.points < 2 || !(grid.hi > grid.lo)) {
    throw DomainError("density grid needs at least 2 points and hi > lo");
  }
  std::string out = "x,fhat\n";
  const double h = (grid.hi - grid.lo) / double(grid.points - 1);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = (i + 1 == grid.points) ? grid.hi : grid.lo + double(i) * h;
    out += format_double(x) + "," + format_double(density(x)) + "\n";
  }
  return out;
}

} // namespace pileup
