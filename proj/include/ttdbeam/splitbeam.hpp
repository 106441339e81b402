#pragma once

// Split beampatterns: the band is cut into G equal contiguous subbands and
// subband g is steered towards directions[g].

#include <charconv>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttdbeam/core.hpp"

namespace ttdbeam {

struct DirectionMap {
  std::vector<double> directions;

  int subbands() const { return static_cast<int>(directions.size()); }

  void validate() const {
    detail::require(!directions.empty(), Errc::invalid_argument, "direction map is empty");
    for (double d : directions)
      detail::require(std::isfinite(d) && d >= -1.0 && d <= 1.0, Errc::invalid_argument,
                      "directions must lie in [-1, 1]");
  }

  void validate_for(const SystemConfig& cfg) const {
    validate();
    detail::require(cfg.n_subcarriers % subbands() == 0, Errc::invalid_argument,
                    "number of subbands must divide the number of subcarriers");
  }

  friend bool operator==(const DirectionMap&, const DirectionMap&) = default;
};

// Parses "a,b,c" into a DirectionMap. Whitespace around values is accepted.
inline DirectionMap parse_direction_list(std::string_view text) {
  DirectionMap map;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) item.remove_prefix(1);
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) item.remove_suffix(1);
    detail::require(!item.empty(), Errc::parse, "empty entry in direction list");
    double value = 0.0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    detail::require(ec == std::errc{} && end == item.data() + item.size(), Errc::parse,
                    "malformed direction value '" + std::string(item) + "'");
    map.directions.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  detail::require(!map.directions.empty(), Errc::parse, "empty direction list");
  for (double d : map.directions)
    detail::require(std::isfinite(d) && d >= -1.0 && d <= 1.0, Errc::parse,
                    "directions must lie in [-1, 1]");
  return map;
}

// Zero-based subband of zero-based subcarrier k.
inline int subband_of(int k, int subbands, int n_subcarriers) {
  detail::require(subbands >= 1 && n_subcarriers >= 1 && n_subcarriers % subbands == 0,
                  Errc::invalid_argument, "number of subbands must divide the number of subcarriers");
  detail::require(k >= 0 && k < n_subcarriers, Errc::invalid_argument, "subcarrier index out of range");
  return k / (n_subcarriers / subbands);
}

// Per-subcarrier steering direction.
inline std::vector<double> expand_directions(const DirectionMap& map, const SystemConfig& cfg) {
  map.validate_for(cfg);
  const int per_band = cfg.n_subcarriers / map.subbands();
  std::vector<double> psi(static_cast<std::size_t>(cfg.n_subcarriers));
  for (int k = 0; k < cfg.n_subcarriers; ++k)
    psi[static_cast<std::size_t>(k)] = map.directions[static_cast<std::size_t>(k / per_band)];
  return psi;
}

// Squint-free target precoder. Not realizable by a TTD array in general.
namespace detail {

// Matched precoder for arbitrary real per-subcarrier directions, including
// values outside [-1, 1].
inline PrecoderMatrix steering_precoder(std::span<const double> psi, const SystemConfig& cfg) {
  require(psi.size() == static_cast<std::size_t>(cfg.n_subcarriers), Errc::dimension_mismatch,
          "one direction per subcarrier required");
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
  PrecoderMatrix v(cfg.n_antennas, cfg.n_subcarriers);
  for (int k = 0; k < cfg.n_subcarriers; ++k) {
    const double slope = kPi * psi[static_cast<std::size_t>(k)] * cfg.subcarrier_freq(k) / cfg.carrier_hz;
    for (int n = 0; n < cfg.n_antennas; ++n) v(n, k) = std::polar(scale, slope * n);
  }
  return v;
}

}  // namespace detail

inline PrecoderMatrix ideal_split_precoder(const DirectionMap& map, const SystemConfig& cfg) {
  return detail::steering_precoder(expand_directions(map, cfg), cfg);
}

// Normalized Dirichlet kernel: (1/sqrt(N)) * sum_n exp(-j n pi offset f_k / f_c).
inline cdouble dirichlet_gain(double offset, int k, const SystemConfig& cfg) {
  cfg.validate();
  detail::require(k >= 0 && k < cfg.n_subcarriers, Errc::invalid_argument, "subcarrier index out of range");
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
  const double omega = kPi * offset * cfg.subcarrier_freq(k) / cfg.carrier_hz;
  cdouble acc{0.0, 0.0};
  for (int n = 0; n < cfg.n_antennas; ++n) acc += std::polar(scale, -omega * n);
  return acc;
}

}  // namespace ttdbeam
