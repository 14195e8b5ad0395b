#ifndef OPTSPLINE_SPEC_JSON_HPP
#define OPTSPLINE_SPEC_JSON_HPP

// JSON design-spec files:
//   {"m": 3, "rho_d": [0.233, 0.48, 0.233],
//    "target": {"kind": "ideal_lowpass_sinc", "cutoff": 0.5},
//    "G": 1024, "window": 64}
// A tabulated target reads a kernel CSV: {"kind": "tabulated", "file": "h.csv"}.

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "design.hpp"
#include "kernel.hpp"

namespace optspline {

/// Relative "file" entries resolve against `base_dir`.
inline DesignSpec design_spec_from_json(const nlohmann::json &j, const std::string &base_dir = ".") {
  if (!j.is_object())
    throw std::invalid_argument("design spec: expected a JSON object");
  DesignSpec spec;
  try {
    spec.order = j.at("m").get<int>();
    spec.rho_d = rho_taps(j.at("rho_d").get<std::vector<double>>());
    spec.grid = j.value("G", kDefaultGrid);
    spec.window = j.value("window", kDefaultTargetWindow);
    const nlohmann::json target = j.value("target", nlohmann::json::object());
    const std::string kind = target.value("kind", std::string("ideal_lowpass_sinc"));
    if (kind == "ideal_lowpass_sinc" || kind == "sinc") {
      spec.target = TargetFilter::ideal_lowpass(target.value("cutoff", 0.5));
    } else if (kind == "tabulated") {
      std::filesystem::path file = target.at("file").get<std::string>();
      if (file.is_relative())
        file = std::filesystem::path(base_dir) / file;
      spec.target = TargetFilter::tabulated(read_kernel_csv(file.string()));
      spec.target.source = file.string();
    } else {
      throw std::invalid_argument("design spec: unknown target kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("design spec: ") + e.what());
  }
  if (static_cast<int>(spec.rho_d.size()) != spec.order)
    throw std::invalid_argument("design spec: rho_d must have exactly m entries");
  spec.validate();
  return spec;
}

inline DesignSpec read_design_spec(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open design spec '" + path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument("design spec '" + path + "': " + e.what());
  }
  return design_spec_from_json(j, std::filesystem::path(path).parent_path().string());
}

inline nlohmann::json design_spec_to_json(const DesignSpec &spec) {
  nlohmann::json j;
  j["m"] = spec.order;
  std::vector<double> taps;
  for (long n = 1; n <= spec.order; ++n)
    taps.push_back(spec.rho_d.at(n));
  j["rho_d"] = taps;
  j["target"] = {{"kind", spec.target.kind_name()}};
  if (spec.target.kind == TargetFilter::Kind::ideal_lowpass_sinc)
    j["target"]["cutoff"] = spec.target.cutoff;
  else if (!spec.target.source.empty())
    j["target"]["file"] = spec.target.source;
  j["G"] = spec.grid;
  j["window"] = spec.window;
  return j;
}

} // namespace optspline

#endif
