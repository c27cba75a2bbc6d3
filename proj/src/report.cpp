#include "polyvol/report.hpp"

#include <cmath>

namespace polyvol {

Json finite_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

namespace {

Json phases_json(const VolumeReport& r) {
  Json out = Json::array();
  for (const auto& p : r.phases) {
    out.push_back({{"ratio", finite_or_null(p.ratio)},
                   {"epsilon", finite_or_null(p.epsilon)},
                   {"points", p.points},
                   {"steps", p.steps},
                   {"binomial_half_width", finite_or_null(p.binomial_half_width)}});
  }
  return out;
}

Json schedule_json(const VolumeReport& r) {
  Json out = Json::array();
  for (const auto& s : r.schedule) {
    Json trace = Json::array();
    for (const auto& probe : s.trace)
      trace.push_back({finite_or_null(probe.s), finite_or_null(probe.mean), probe.left, probe.right});
    out.push_back({{"s", finite_or_null(s.s)},
                   {"probes", s.probes},
                   {"resamples", s.resamples},
                   {"hnr_steps", s.hnr_steps},
                   {"trace", trace}});
  }
  return out;
}

}  // namespace

Json report_to_json(const VolumeReport& r, bool diagnostics, bool include_time) {
  Json j;
  j["representation"] = r.representation;
  j["d"] = r.d;
  j["k_or_facets_or_vertices"] = r.size;
  j["epsilon"] = finite_or_null(r.epsilon);
  j["seed"] = r.seed;
  j["body"] = r.body;
  j["walk"] = r.walk;
  j["m"] = r.m;
  Json ratios = Json::array();
  for (double x : r.ratios) ratios.push_back(finite_or_null(x));
  j["ratios"] = ratios;
  j["steps_total"] = r.steps_total;
  j["log_volume"] = finite_or_null(r.log_volume);
  j["volume"] = finite_or_null(r.volume);
  if (include_time) j["time_seconds"] = finite_or_null(r.time_seconds);
  if (diagnostics) {
    j["schedule_steps"] = r.schedule_steps;
    j["exact_samples"] = r.exact_samples;
    j["log_terminal_volume"] = finite_or_null(r.log_terminal_volume);
    j["log_det_map"] = finite_or_null(r.log_det_map);
    j["phases"] = phases_json(r);
    j["schedule"] = schedule_json(r);
    if (r.terminal) j["terminal"] = report_to_json(*r.terminal, true, include_time);
  }
  return j;
}

std::string report_to_string(const VolumeReport& report, bool diagnostics, bool include_time) {
  return report_to_json(report, diagnostics, include_time).dump();
}

}  // namespace polyvol
