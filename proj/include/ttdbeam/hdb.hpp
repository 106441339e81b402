#pragma once

// Homomorphic directional beamforming: the configuration of a split
// beampattern is the sum of the configurations of its generators.

#include <cmath>
#include <vector>

#include "ttdbeam/core.hpp"
#include "ttdbeam/dictionary.hpp"
#include "ttdbeam/generators.hpp"
#include "ttdbeam/solvers.hpp"
#include "ttdbeam/splitbeam.hpp"

namespace ttdbeam {

inline void check_compatible(const GeneratorDictionary& dict, const SystemConfig& cfg) {
  detail::require(dict.meta == cfg, Errc::incompatible,
                  "dictionary was built for a different (N, M, f_c, BW)");
  detail::require(!dict.empty(), Errc::incompatible, "dictionary is empty");
}

// Per-generator configurations, before summation.
inline std::vector<ArrayConfig> generator_configs(const DirectionMap& map, const GeneratorDictionary& dict,
                                                  const SystemConfig& cfg) {
  map.validate_for(cfg);
  check_compatible(dict, cfg);
  const auto delta = raw_deltas(map);
  const int subbands = map.subbands();
  std::vector<ArrayConfig> out;
  out.reserve(delta.size());
  out.push_back(constant_direction_config(delta[0], cfg));
  double previous_transition = -1.0;
  for (int g = 1; g < subbands; ++g) {
    const auto band = generator_band(g, subbands, cfg);
    detail::require(band.center_hz > previous_transition, Errc::invalid_argument,
                    "generator transitions must be distinct");
    previous_transition = band.center_hz;
    const auto& entry = lookup(dict, delta[static_cast<std::size_t>(g)]);
    out.push_back(scale_shift(entry, band.center_hz, band.bandwidth_hz, cfg));
  }
  return out;
}

// O(N G): one dictionary read and one linear pass per generator.
inline ArrayConfig synthesize(const DirectionMap& map, const GeneratorDictionary& dict, const SystemConfig& cfg) {
  auto parts = generator_configs(map, dict, cfg);
  ArrayConfig total = std::move(parts.front());
  for (std::size_t g = 1; g < parts.size(); ++g) total += parts[g];
  return total;
}

inline Synthesizer make_hdb_synthesizer(const GeneratorDictionary& dict) {
  return [&dict](const DirectionMap& map) { return synthesize(map, dict, dict.meta); };
}

}  // namespace ttdbeam
