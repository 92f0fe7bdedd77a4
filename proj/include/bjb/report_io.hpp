// CSV and JSON serialization of decay reports.
#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bjb/green_spectral.hpp"

namespace bjb {

inline constexpr const char* report_format_tag = "blockjacobi-bounds v1";

/// %.17g: round-trips every double and is locale independent.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_report_csv(std::ostream& os, const DecayReport& r) {
  os << "# " << report_format_tag << '\n';
  os << "index,measured,envelope,ratio,verdict\n";
  for (std::size_t i = 0; i < r.indices.size(); ++i)
    os << r.indices[i] << ',' << format_double(r.measured[i]) << ','
       << format_double(r.envelope[i]) << ',' << format_double(r.ratio(i)) << ','
       << (r.verdict[i] ? "pass" : "fail") << '\n';
}

inline nlohmann::ordered_json params_json(const BoundParams& p) {
  nlohmann::ordered_json j;
  j["lambda_re"] = p.lambda.real();
  j["lambda_im"] = p.lambda.imag();
  j["b"] = p.b;
  j["delta"] = p.delta;
  j["epsilon"] = p.epsilon;
  return j;
}

inline nlohmann::ordered_json report_summary_json(const DecayReport& r) {
  nlohmann::ordered_json j;
  j["format"] = report_format_tag;
  j["mode"] = to_string(r.mode);
  j["label"] = r.label;
  j["N"] = r.nblocks;
  j["k"] = r.source;
  j["calibration"] = {r.calibration.first, r.calibration.last};
  j["fitted_C"] = r.fitted_C;
  j["qualified_C"] = r.qualified_C ? nlohmann::ordered_json(*r.qualified_C) : nullptr;
  j["gamma"] = r.gamma;
  j["params"] = params_json(r.params);
  j["pass_fraction"] = r.pass_fraction();
  j["all_pass"] = r.all_pass();
  if (r.mode == ReportMode::eigenvector) j["boundary_suspect"] = r.boundary_suspect;
  return j;
}

inline std::string report_csv(const DecayReport& r) {
  std::ostringstream os;
  write_report_csv(os, r);
  return os.str();
}

}  // namespace bjb
