#pragma once

// ArrayConfig JSON and small file helpers.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "ttdbeam/core.hpp"

namespace ttdbeam {

inline nlohmann::json config_to_json(const ArrayConfig& phi, const SystemConfig& cfg) {
  check_config(phi, cfg);
  return {
      {"n", cfg.n_antennas},
      {"delays_s", phi.delays_s},
      {"phases_rad", phi.phases_rad},
      {"fc_hz", cfg.carrier_hz},
      {"bw_hz", cfg.bandwidth_hz},
      {"m", cfg.n_subcarriers},
  };
}

// Errc::parse on any missing, mistyped or inconsistent field.
inline std::pair<ArrayConfig, SystemConfig> config_from_json(const nlohmann::json& j) {
  try {
    SystemConfig cfg;
    cfg.n_antennas = j.at("n").get<int>();
    cfg.n_subcarriers = j.at("m").get<int>();
    cfg.carrier_hz = j.at("fc_hz").get<double>();
    cfg.bandwidth_hz = j.at("bw_hz").get<double>();
    cfg.validate();
    ArrayConfig phi(j.at("delays_s").get<std::vector<double>>(), j.at("phases_rad").get<std::vector<double>>());
    check_config(phi, cfg);
    detail::require(phi.is_finite(), Errc::parse, "config contains non-finite values");
    return {std::move(phi), cfg};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("invalid config JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::parse) throw;
    throw Error(Errc::parse, std::string("invalid config JSON: ") + e.what());
  }
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  detail::require(static_cast<bool>(in), Errc::io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  detail::require(!in.bad(), Errc::io, "failed reading '" + path.string() + "'");
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  detail::require(static_cast<bool>(out), Errc::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  detail::require(static_cast<bool>(out), Errc::io, "failed writing '" + path.string() + "'");
}

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace ttdbeam
