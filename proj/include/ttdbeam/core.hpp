#pragma once

// Array model for a uniform linear TTD array (half-wavelength spacing at the
// carrier) driving an M-subcarrier OFDM band, and the three synthesis maps
//
//   omega1 : ArrayConfig    -> PrecoderMatrix   (TTD generating function)
//   omega2 : PrecoderMatrix -> Beampattern      (per-subcarrier scaled DTFT)
//   omega3 = omega2 o omega1
//
// Sine-space direction Psi enters subcarrier k through the frequency variable
// Omega_k = pi * Psi * f_k / f_c.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ttdbeam/error.hpp"

namespace ttdbeam {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct SystemConfig {
  int n_antennas = 16;
  int n_subcarriers = 1200;
  double carrier_hz = 28e9;
  double bandwidth_hz = 3e9;

  void validate() const {
    detail::require(n_antennas >= 1, Errc::invalid_argument, "n_antennas must be >= 1");
    detail::require(n_subcarriers >= 1, Errc::invalid_argument, "n_subcarriers must be >= 1");
    detail::require(std::isfinite(carrier_hz) && std::isfinite(bandwidth_hz),
                    Errc::invalid_argument, "carrier and bandwidth must be finite");
    detail::require(bandwidth_hz > 0.0 && carrier_hz > bandwidth_hz / 2.0,
                    Errc::invalid_argument, "require f_c > BW/2 > 0");
  }

  double subcarrier_spacing() const { return bandwidth_hz / n_subcarriers; }

  // Zero-based subcarrier index k corresponds to m = k + 1.
  double subcarrier_freq(int k) const {
    return carrier_hz + (k + 1) * subcarrier_spacing() - bandwidth_hz / 2.0;
  }

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

inline std::vector<double> subcarrier_freqs(const SystemConfig& cfg) {
  cfg.validate();
  std::vector<double> f(static_cast<std::size_t>(cfg.n_subcarriers));
  for (int k = 0; k < cfg.n_subcarriers; ++k) f[static_cast<std::size_t>(k)] = cfg.subcarrier_freq(k);
  return f;
}

// Per-antenna true time delays (seconds) and phase shifts (radians). Negative
// delays are allowed; only hardware export checks the [0, t_max] range.
struct ArrayConfig {
  std::vector<double> delays_s;
  std::vector<double> phases_rad;

  ArrayConfig() = default;
  ArrayConfig(std::vector<double> delays, std::vector<double> phases)
      : delays_s(std::move(delays)), phases_rad(std::move(phases)) {
    detail::require(delays_s.size() == phases_rad.size(), Errc::dimension_mismatch,
                    "delay and phase vectors differ in length");
  }

  static ArrayConfig zeros(int n) {
    return ArrayConfig(std::vector<double>(static_cast<std::size_t>(n), 0.0),
                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }

  std::size_t size() const { return delays_s.size(); }

  bool is_finite() const {
    auto finite = [](double x) { return std::isfinite(x); };
    return std::ranges::all_of(delays_s, finite) && std::ranges::all_of(phases_rad, finite);
  }

  ArrayConfig& operator+=(const ArrayConfig& rhs) {
    detail::require(size() == rhs.size(), Errc::dimension_mismatch, "ArrayConfig sizes differ");
    for (std::size_t n = 0; n < size(); ++n) {
      delays_s[n] += rhs.delays_s[n];
      phases_rad[n] += rhs.phases_rad[n];
    }
    return *this;
  }

  friend ArrayConfig operator+(ArrayConfig lhs, const ArrayConfig& rhs) { return lhs += rhs; }
  friend bool operator==(const ArrayConfig&, const ArrayConfig&) = default;
};

// Dense N x M complex matrix, row per antenna.
class PrecoderMatrix {
 public:
  PrecoderMatrix() = default;
  PrecoderMatrix(int n_antennas, int n_subcarriers)
      : rows_(n_antennas), cols_(n_subcarriers),
        data_(static_cast<std::size_t>(n_antennas) * static_cast<std::size_t>(n_subcarriers)) {}

  int antennas() const { return rows_; }
  int subcarriers() const { return cols_; }

  cdouble& operator()(int n, int k) { return data_[index(n, k)]; }
  const cdouble& operator()(int n, int k) const { return data_[index(n, k)]; }

  std::span<const cdouble> row(int n) const {
    return {data_.data() + index(n, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<const cdouble> data() const { return data_; }
  std::span<cdouble> data() { return data_; }

  friend bool operator==(const PrecoderMatrix&, const PrecoderMatrix&) = default;

 private:
  std::size_t index(int n, int k) const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(k);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<cdouble> data_;
};

// Strictly increasing sample points in [-1, 1].
class PsiGrid {
 public:
  explicit PsiGrid(std::vector<double> points) : points_(std::move(points)) {
    detail::require(points_.size() >= 2, Errc::invalid_argument, "PsiGrid needs at least 2 points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      detail::require(points_[i] >= -1.0 && points_[i] <= 1.0, Errc::invalid_argument,
                      "PsiGrid points must lie in [-1, 1]");
      if (i > 0)
        detail::require(points_[i] > points_[i - 1], Errc::invalid_argument,
                        "PsiGrid points must be strictly increasing");
    }
  }

  // Uniform grid over [-1, 1] with exact endpoints.
  static PsiGrid uniform(std::size_t count = 1001) {
    detail::require(count >= 2, Errc::invalid_argument, "PsiGrid needs at least 2 points");
    std::vector<double> p(count);
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) p[i] = -1.0 + 2.0 * static_cast<double>(i) / denom;
    p.back() = 1.0;
    return PsiGrid(std::move(p));
  }

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> points() const { return points_; }

  // Largest spacing between neighbours.
  double max_step() const {
    double s = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) s = std::max(s, points_[i] - points_[i - 1]);
    return s;
  }

 private:
  std::vector<double> points_;
};

// Complex gain P(Psi, k) on grid x subcarriers.
class Beampattern {
 public:
  Beampattern(PsiGrid grid, int n_subcarriers)
      : grid_(std::move(grid)), cols_(n_subcarriers),
        gains_(grid_.size() * static_cast<std::size_t>(n_subcarriers)) {}

  const PsiGrid& grid() const { return grid_; }
  int subcarriers() const { return cols_; }

  cdouble& operator()(std::size_t i, int k) { return gains_[i * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(k)]; }
  const cdouble& operator()(std::size_t i, int k) const {
    return gains_[i * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(k)];
  }

  // Grid index of the largest |P| in column k (first one on ties).
  std::size_t argmax(int k) const {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      const double mag = std::abs((*this)(i, k));
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    return best;
  }

  double peak_direction(int k) const { return grid_[argmax(k)]; }

 private:
  PsiGrid grid_;
  int cols_;
  std::vector<cdouble> gains_;
};

// Maps x into (-1, 1] by subtracting a multiple of 2.
inline double wrap_direction(double x) { return x - 2.0 * std::ceil((x - 1.0) / 2.0); }

inline void check_config(const ArrayConfig& phi, const SystemConfig& cfg) {
  detail::require(phi.delays_s.size() == static_cast<std::size_t>(cfg.n_antennas) &&
                      phi.phases_rad.size() == static_cast<std::size_t>(cfg.n_antennas),
                  Errc::dimension_mismatch, "ArrayConfig length does not match N");
}

inline PrecoderMatrix omega1(const ArrayConfig& phi, const SystemConfig& cfg) {
  cfg.validate();
  check_config(phi, cfg);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
  PrecoderMatrix v(cfg.n_antennas, cfg.n_subcarriers);
  for (int n = 0; n < cfg.n_antennas; ++n) {
    const double t = phi.delays_s[static_cast<std::size_t>(n)];
    const double p = phi.phases_rad[static_cast<std::size_t>(n)];
    for (int k = 0; k < cfg.n_subcarriers; ++k)
      v(n, k) = std::polar(scale, -kTwoPi * cfg.subcarrier_freq(k) * t + p);
  }
  return v;
}

inline Beampattern omega2(const PrecoderMatrix& v, const SystemConfig& cfg, const PsiGrid& grid) {
  cfg.validate();
  detail::require(v.antennas() == cfg.n_antennas && v.subcarriers() == cfg.n_subcarriers,
                  Errc::dimension_mismatch, "precoder shape does not match N x M");
  Beampattern p(grid, cfg.n_subcarriers);
  for (int k = 0; k < cfg.n_subcarriers; ++k) {
    const double ratio = cfg.subcarrier_freq(k) / cfg.carrier_hz;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const cdouble step = std::polar(1.0, -kPi * grid[i] * ratio);
      cdouble steer{1.0, 0.0};
      cdouble acc{0.0, 0.0};
      for (int n = 0; n < cfg.n_antennas; ++n) {
        acc += v(n, k) * steer;
        steer *= step;
      }
      p(i, k) = acc;
    }
  }
  return p;
}

inline Beampattern omega3(const ArrayConfig& phi, const SystemConfig& cfg, const PsiGrid& grid) {
  return omega2(omega1(phi, cfg), cfg, grid);
}

// Pattern of the star-composition of the patterns generated by two configs.
// Evaluated through the antenna domain, where the composition is the pattern
// of the summed configuration.
inline Beampattern star(const ArrayConfig& lhs, const ArrayConfig& rhs, const SystemConfig& cfg,
                        const PsiGrid& grid) {
  check_config(lhs, cfg);
  check_config(rhs, cfg);
  return omega3(lhs + rhs, cfg, grid);
}

namespace detail {

// Matched gain sum_n v_n exp(-j n pi psi f_k / f_c) for any real psi. Values
// outside [-1, 1] address the same physical direction as psi - 2 only at f_c.
inline cdouble steered_gain(const ArrayConfig& phi, double psi, int k, const SystemConfig& cfg) {
  const double f = cfg.subcarrier_freq(k);
  const double spatial = -kPi * psi * f / cfg.carrier_hz;
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
  cdouble acc{0.0, 0.0};
  for (std::size_t n = 0; n < phi.size(); ++n)
    acc += std::polar(scale, -kTwoPi * f * phi.delays_s[n] + phi.phases_rad[n] + spatial * static_cast<double>(n));
  return acc;
}

}  // namespace detail

// Single-point omega3 in O(N).
inline cdouble gain_at(const ArrayConfig& phi, double psi, int k, const SystemConfig& cfg) {
  check_config(phi, cfg);
  detail::require(k >= 0 && k < cfg.n_subcarriers, Errc::invalid_argument, "subcarrier index out of range");
  detail::require(psi >= -1.0 && psi <= 1.0, Errc::invalid_argument, "psi must lie in [-1, 1]");
  return detail::steered_gain(phi, psi, k, cfg);
}

}  // namespace ttdbeam
