#pragma once

// Split-beampattern generators.
//
// A G-subband split pattern with directions phi_1..phi_G is the
// star-composition of G generators. Generator g steers subbands g..G to
// delta_g and leaves subbands 1..g-1 at broadside, so the cumulative sums of
// the deltas reproduce the target directions. Generator 1 steers the whole
// band and has a closed-form TTD realization; generators g >= 2 are two-way
// splits whose transition sits at the lower edge of subband g.

#include <cmath>
#include <vector>

#include "ttdbeam/core.hpp"
#include "ttdbeam/splitbeam.hpp"

namespace ttdbeam {

// Forward substitution of cumsum(delta) = phi, followed by unwrapping every
// delta_g (g >= 2) into [-1, 1]. The multiples of 2 removed there are moved
// onto delta_1, which is finally wrapped into (-1, 1].
inline std::vector<double> decompose(const DirectionMap& map) {
  map.validate();
  const auto& phi = map.directions;
  std::vector<double> delta(phi.size());
  delta[0] = phi[0];
  for (std::size_t g = 1; g < phi.size(); ++g) delta[g] = phi[g] - phi[g - 1];
  for (std::size_t g = 1; g < delta.size(); ++g) {
    if (std::abs(delta[g]) > 1.0) {
      const double shift = 2.0 * std::round(delta[g] / 2.0);
      delta[g] -= shift;
      delta[0] += shift;
    }
  }
  delta[0] = wrap_direction(delta[0]);
  return delta;
}

// Forward substitution only: delta_1 = phi_1, delta_g = phi_g - phi_{g-1},
// each in [-2, 2]. Unlike decompose(), nothing is moved modulo 2; a shift by
// 2 in sine space is direction-preserving at f_c alone, so the raw offsets
// keep every subband squint-free.
inline std::vector<double> raw_deltas(const DirectionMap& map) {
  map.validate();
  const auto& phi = map.directions;
  std::vector<double> delta(phi.size());
  delta[0] = phi[0];
  for (std::size_t g = 1; g < phi.size(); ++g) delta[g] = phi[g] - phi[g - 1];
  return delta;
}

struct GeneratorBand {
  double center_hz;
  double bandwidth_hz;
};

// Band onto which the two-subband dictionary entry for generator g
// (zero-based, g >= 1) is mapped. The center is the generator's transition
// frequency; the width 2 BW (G-1)/G covers the whole operating band.
// Generator 0 is closed form; its band is reported as the original band.
inline GeneratorBand generator_band(int g, int subbands, const SystemConfig& cfg) {
  cfg.validate();
  detail::require(subbands >= 1 && g >= 0 && g < subbands, Errc::invalid_argument, "generator index out of range");
  if (g == 0) return {cfg.carrier_hz, cfg.bandwidth_hz};
  const double bw = cfg.bandwidth_hz;
  return {cfg.carrier_hz - bw / 2.0 + g * bw / subbands, 2.0 * bw * (subbands - 1) / subbands};
}

// Replaces every delay by the equivalent one (modulo the subcarrier-grid
// period 1/df) closest to zero, compensating the constant phase so that
// omega1 on the subcarrier grid is unchanged. Band rescaling is only
// meaningful for these short representatives.
inline ArrayConfig canonical_delays(const ArrayConfig& phi, const SystemConfig& cfg) {
  cfg.validate();
  check_config(phi, cfg);
  const double period = 1.0 / cfg.subcarrier_spacing();
  // f_k * period = base + k + 1 for the zero-based subcarrier k.
  const double base = (cfg.carrier_hz - cfg.bandwidth_hz / 2.0) / cfg.subcarrier_spacing();
  const double base_frac = base - std::floor(base);
  ArrayConfig out = phi;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    const double wraps = std::round(phi.delays_s[n] / period);
    if (wraps == 0.0) continue;
    out.delays_s[n] = phi.delays_s[n] - wraps * period;
    const double turns = wraps * base_frac;
    out.phases_rad[n] = std::remainder(phi.phases_rad[n] - kTwoPi * (turns - std::floor(turns)), kTwoPi);
  }
  return out;
}

// Re-targets a configuration so that its per-antenna response at frequency
// to_center + alpha * (f - from_center) equals the original response at f.
inline ArrayConfig rebase_band(const ArrayConfig& phi, double from_center_hz, double to_center_hz, double alpha) {
  detail::require(std::isfinite(alpha) && alpha > 0.0, Errc::invalid_argument, "band scale factor must be positive");
  ArrayConfig out = phi;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    const double t = phi.delays_s[n];
    out.delays_s[n] = t / alpha;
    out.phases_rad[n] = phi.phases_rad[n] - kTwoPi * from_center_hz * t + kTwoPi * to_center_hz * t / alpha;
  }
  return out;
}

// Moves a configuration designed for (f_c, BW) onto (fc_new, bw_new).
inline ArrayConfig scale_shift(const ArrayConfig& phi, double fc_new_hz, double bw_new_hz, const SystemConfig& cfg) {
  cfg.validate();
  check_config(phi, cfg);
  detail::require(std::isfinite(bw_new_hz) && bw_new_hz > 0.0, Errc::invalid_argument, "new bandwidth must be positive");
  return rebase_band(phi, cfg.carrier_hz, fc_new_hz, bw_new_hz / cfg.bandwidth_hz);
}

}  // namespace ttdbeam
