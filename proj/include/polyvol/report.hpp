#pragma once

#include <string>

#include <json.hpp>

#include "polyvol/estimate.hpp"

namespace polyvol {

using Json = nlohmann::ordered_json;

/// Report fields in a fixed order; non-finite numbers become null.
/// With `diagnostics`, per-phase estimates and schedule traces are appended.
Json report_to_json(const VolumeReport& report, bool diagnostics = false, bool include_time = true);

/// One-line JSON text of the report.
std::string report_to_string(const VolumeReport& report, bool diagnostics = false, bool include_time = true);

/// The number itself, or null when it is not finite.
Json finite_or_null(double x);

}  // namespace polyvol
