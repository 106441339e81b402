#pragma once

// Baseline synthesis routes:
//  * closed-form constant-direction (squint-free) configurations,
//  * a per-antenna alternating minimizer of the precoder-domain objective
//      sum_{n,k} |V_Phi(n,k) - V_target(n,k)|^2,
//  * an exhaustive grid oracle for desk-scale validation.
//
// The objective separates over antennas: row n of V_Phi depends only on
// (t_n, phi_n). For a fixed delay the optimal phase is closed form,
//   phi_n = arg sum_k V_target(n,k) exp(j 2 pi f_k t_n),
// which leaves a one-dimensional search over t_n.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "ttdbeam/core.hpp"
#include "ttdbeam/splitbeam.hpp"

namespace ttdbeam {

struct SolverParams {
  double max_delay_s = 0.0;
  int iterations = 30;
  int delay_grid_size = 4096;

  // t_max = M / BW, one full period of the subcarrier-sampled delay response.
  static SolverParams for_system(const SystemConfig& cfg, int iterations = 30, int delay_grid_size = 4096) {
    return SolverParams{cfg.n_subcarriers / cfg.bandwidth_hz, iterations, delay_grid_size};
  }

  void validate() const {
    detail::require(std::isfinite(max_delay_s) && max_delay_s > 0.0, Errc::invalid_argument,
                    "max delay must be positive");
    detail::require(iterations >= 1, Errc::invalid_argument, "iterations must be >= 1");
    detail::require(delay_grid_size >= 2, Errc::invalid_argument, "delay grid needs at least 2 points");
  }
};

// Uniform delay grid over [0, t_max] used by the line search.
inline std::vector<double> delay_grid(const SolverParams& params) {
  params.validate();
  const auto count = static_cast<std::size_t>(params.delay_grid_size);
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = params.max_delay_s * static_cast<double>(i) / static_cast<double>(count - 1);
  return t;
}

// On the subcarrier grid a delay of 1/df only adds a constant phase, so
// delays are equivalent modulo this period.
inline double delay_period(const SystemConfig& cfg) { return 1.0 / cfg.subcarrier_spacing(); }

// Steers every subcarrier to sine-space direction delta.
inline ArrayConfig constant_direction_config(double delta, const SystemConfig& cfg) {
  cfg.validate();
  auto phi = ArrayConfig::zeros(cfg.n_antennas);
  for (int n = 0; n < cfg.n_antennas; ++n)
    phi.delays_s[static_cast<std::size_t>(n)] = -delta * n / (2.0 * cfg.carrier_hz);
  return phi;
}

namespace detail {

// sum_k |(1/sqrt N) exp(j(-2 pi f_k t + phase)) - target_k|^2
inline double antenna_objective(double t, double phase, std::span<const cdouble> target, const SystemConfig& cfg) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
  double acc = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const cdouble v = std::polar(scale, -kTwoPi * cfg.subcarrier_freq(static_cast<int>(k)) * t + phase);
    acc += std::norm(v - target[k]);
  }
  return acc;
}

// |sum_k target_k exp(j 2 pi f_k t)| by Horner in z = exp(j 2 pi df t).
inline double correlation_magnitude(double t, std::span<const cdouble> target, double spacing_hz) {
  const cdouble z = std::polar(1.0, kTwoPi * spacing_hz * t);
  cdouble acc = target.back();
  for (std::size_t k = target.size() - 1; k-- > 0;) acc = acc * z + target[k];
  return std::abs(acc);
}

// |sum_k target_k exp(j 2 pi f_k t)| for every t of the grid. A grid over
// exactly one delay period samples a DFT of the target row folded to length
// K - 1; any other grid is evaluated point by point.
inline void grid_correlation(std::span<const cdouble> target, std::span<const double> grid, double spacing_hz,
                             bool one_period, Eigen::FFT<double>& fft, std::vector<cdouble>& folded,
                             std::vector<cdouble>& spectrum, std::vector<double>& out) {
  out.resize(grid.size());
  if (!one_period) {
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = correlation_magnitude(grid[j], target, spacing_hz);
    return;
  }
  const std::size_t length = grid.size() - 1;
  folded.assign(length, cdouble{0.0, 0.0});
  for (std::size_t k = 0; k < target.size(); ++k) folded[k % length] += std::conj(target[k]);
  spectrum.resize(length);
  fft.fwd(spectrum.data(), folded.data(), static_cast<Eigen::Index>(length));
  for (std::size_t j = 0; j < length; ++j) out[j] = std::abs(spectrum[j]);
  out[length] = out[0];
}

inline double closed_form_phase(double t, std::span<const cdouble> target, const SystemConfig& cfg) {
  cdouble acc{0.0, 0.0};
  for (std::size_t k = 0; k < target.size(); ++k)
    acc += target[k] * std::polar(1.0, kTwoPi * cfg.subcarrier_freq(static_cast<int>(k)) * t);
  return std::arg(acc);
}

// Brings a refined delay back into [0, t_max], through an equivalent delay
// one period away when possible and by clamping otherwise.
inline double fold_delay(double t, double period, double max_delay) {
  const double slack = 1e-12 * max_delay;
  if (t < 0.0 && t + period <= max_delay + slack) return std::min(t + period, max_delay);
  if (t > max_delay && t - period >= -slack) return std::max(t - period, 0.0);
  return std::clamp(t, 0.0, max_delay);
}

inline void check_target(const PrecoderMatrix& target, const SystemConfig& cfg) {
  cfg.validate();
  require(target.antennas() == cfg.n_antennas && target.subcarriers() == cfg.n_subcarriers,
          Errc::dimension_mismatch, "target precoder shape does not match N x M");
}

}  // namespace detail

inline double objective(const ArrayConfig& phi, const PrecoderMatrix& target, const SystemConfig& cfg) {
  detail::check_target(target, cfg);
  check_config(phi, cfg);
  double total = 0.0;
  for (int n = 0; n < cfg.n_antennas; ++n) {
    const auto un = static_cast<std::size_t>(n);
    total += detail::antenna_objective(phi.delays_s[un], phi.phases_rad[un], target.row(n), cfg);
  }
  return total;
}

struct JptaResult {
  ArrayConfig config;
  // Objective of the initial point followed by the objective after each sweep.
  std::vector<double> objective_history;
};

// Alternating minimization over (delay, phase) per antenna. The first sweep
// scans the full delay grid; later sweeps refine each delay on a local grid
// whose half-width halves every sweep, starting at one coarse grid step.
// Refined delays that leave [0, t_max] are folded back by one delay period.
// A candidate replaces the current antenna setting only if it strictly lowers
// that antenna's objective, so the total objective never increases.
inline JptaResult jpta_approx_traced(const PrecoderMatrix& target, const SolverParams& params, const SystemConfig& cfg,
                                     const std::optional<ArrayConfig>& init = std::nullopt) {
  detail::check_target(target, cfg);
  params.validate();
  ArrayConfig phi = init.value_or(ArrayConfig::zeros(cfg.n_antennas));
  check_config(phi, cfg);

  constexpr int kRefinePoints = 9;
  const auto grid = delay_grid(params);
  const double coarse_step = grid[1] - grid[0];
  const double spacing = cfg.subcarrier_spacing();
  const double period = delay_period(cfg);

  std::vector<double> current(static_cast<std::size_t>(cfg.n_antennas));
  for (int n = 0; n < cfg.n_antennas; ++n) {
    const auto un = static_cast<std::size_t>(n);
    current[un] = detail::antenna_objective(phi.delays_s[un], phi.phases_rad[un], target.row(n), cfg);
  }

  JptaResult result;
  auto total = [&] {
    double s = 0.0;
    for (double c : current) s += c;
    return s;
  };
  result.objective_history.push_back(total());

  const bool one_period = std::abs(params.max_delay_s * spacing - 1.0) <= 1e-9;
  Eigen::FFT<double> fft;
  std::vector<cdouble> folded;
  std::vector<cdouble> spectrum;
  std::vector<double> magnitude;
  std::vector<double> local(kRefinePoints);
  for (int sweep = 0; sweep < params.iterations; ++sweep) {
    for (int n = 0; n < cfg.n_antennas; ++n) {
      const auto un = static_cast<std::size_t>(n);
      const auto row = target.row(n);
      std::span<const double> candidates = grid;
      if (sweep == 0) {
        detail::grid_correlation(row, grid, spacing, one_period, fft, folded, spectrum, magnitude);
      } else {
        const double half = coarse_step * std::ldexp(1.0, 1 - sweep);
        for (int i = 0; i < kRefinePoints; ++i)
          local[static_cast<std::size_t>(i)] = phi.delays_s[un] - half + 2.0 * half * i / (kRefinePoints - 1);
        candidates = local;
        magnitude.resize(local.size());
        for (std::size_t i = 0; i < local.size(); ++i)
          magnitude[i] = detail::correlation_magnitude(local[i], row, spacing);
      }

      // Ties keep the smaller delay.
      double best_t = candidates[0];
      double best_mag = -1.0;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (magnitude[i] > best_mag) {
          best_mag = magnitude[i];
          best_t = candidates[i];
        }
      }
      best_t = detail::fold_delay(best_t, period, params.max_delay_s);
      const double best_phase = detail::closed_form_phase(best_t, row, cfg);
      const double value = detail::antenna_objective(best_t, best_phase, row, cfg);
      if (value < current[un]) {
        current[un] = value;
        phi.delays_s[un] = best_t;
        phi.phases_rad[un] = best_phase;
      }
    }
    result.objective_history.push_back(total());
  }
  result.config = std::move(phi);
  return result;
}

inline ArrayConfig jpta_approx(const PrecoderMatrix& target, const SolverParams& params, const SystemConfig& cfg,
                               const std::optional<ArrayConfig>& init = std::nullopt) {
  return jpta_approx_traced(target, params, cfg, init).config;
}

inline constexpr int kOracleMaxAntennas = 6;
inline constexpr std::size_t kOracleMaxGridProduct = std::size_t{1} << 20;

// Exact per-antenna minimizer over the Cartesian (delay x phase) grid. Ties
// keep the first point in (delay, phase) scan order.
inline ArrayConfig exhaustive_oracle(const PrecoderMatrix& target, const SystemConfig& cfg,
                                     std::span<const double> delays, std::span<const double> phases) {
  detail::check_target(target, cfg);
  detail::require(cfg.n_antennas <= kOracleMaxAntennas, Errc::invalid_argument,
                  "exhaustive oracle is limited to N <= 6");
  detail::require(!delays.empty() && !phases.empty(), Errc::invalid_argument, "oracle grids must be non-empty");
  detail::require(delays.size() * phases.size() <= kOracleMaxGridProduct, Errc::invalid_argument,
                  "oracle grid too large");
  auto phi = ArrayConfig::zeros(cfg.n_antennas);
  for (int n = 0; n < cfg.n_antennas; ++n) {
    const auto row = target.row(n);
    double best = std::numeric_limits<double>::infinity();
    for (double t : delays)
      for (double p : phases) {
        const double value = detail::antenna_objective(t, p, row, cfg);
        if (value < best) {
          best = value;
          phi.delays_s[static_cast<std::size_t>(n)] = t;
          phi.phases_rad[static_cast<std::size_t>(n)] = p;
        }
      }
  }
  return phi;
}

// Maps a direction map to an array configuration.
using Synthesizer = std::function<ArrayConfig(const DirectionMap&)>;

// Named synthesis procedures. Additional baselines register here.
class SynthesizerRegistry {
 public:
  void add(std::string name, Synthesizer fn) { entries_.insert_or_assign(std::move(name), std::move(fn)); }

  const Synthesizer& get(const std::string& name) const {
    const auto it = entries_.find(name);
    detail::require(it != entries_.end(), Errc::invalid_argument, "unknown synthesizer '" + name + "'");
    return it->second;
  }

  bool contains(const std::string& name) const { return entries_.contains(name); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, fn] : entries_) out.push_back(name);
    return out;
  }

 private:
  std::map<std::string, Synthesizer> entries_;
};

// Direct baseline: fit the ideal split precoder with the alternating minimizer.
inline Synthesizer make_jpta_synthesizer(const SystemConfig& cfg, const SolverParams& params) {
  return [cfg, params](const DirectionMap& map) {
    return jpta_approx(ideal_split_precoder(map, cfg), params, cfg);
  };
}

}  // namespace ttdbeam
