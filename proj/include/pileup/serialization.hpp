#pragma once

#include "pileup/harness.hpp"
#include "pileup/sinc_estimator.hpp"
#include "pileup/trig_estimator.hpp"

#include <json.hpp>

namespace pileup {

using Json = nlohmann::json;

//! {"basis":"trig","m","interval":[lo,hi],"coeffs","n","dropped"}
Json to_json(const TrigEstimate& est);
//! {"basis":"sinc","m","K","T","coeffs":[[re,im],...],"n"}
Json to_json(const SincEstimate& est);
TrigEstimate trig_estimate_from_json(const Json& j);
SincEstimate sinc_estimate_from_json(const Json& j);

Json to_json(const MISEReport& report);

//! "x,fhat" header followed by one row per grid node.
std::string density_grid_csv(const std::function<double(double)>& density, const Grid& grid);

} // namespace pileup
