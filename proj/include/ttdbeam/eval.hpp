#pragma once

// Spectral-efficiency evaluation: Monte-Carlo trials over random UE
// directions, per-subband / per-subcarrier averages, ECDF and a wall-clock
// benchmark of synthesis procedures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttdbeam/core.hpp"
#include "ttdbeam/parallel.hpp"
#include "ttdbeam/solvers.hpp"
#include "ttdbeam/splitbeam.hpp"

namespace ttdbeam {

inline constexpr const char* kRngAlgorithm = "splitmix64";

// SplitMix64 (Steele, Lea, Flood). Small, splittable by seeding, and easy to
// reimplement bit-exactly elsewhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) by the multiply-high method.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Seed of trial t: first output of SplitMix64 seeded with
// master_seed + t * golden-gamma, so trials can be replayed independently.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return SplitMix64(master_seed + trial * 0x9E3779B97F4A7C15ull).next();
}

// Point a of the A-point direction grid over [-1, 1].
inline double grid_direction(int a, int grid_size) {
  detail::require(grid_size >= 2 && a >= 0 && a < grid_size, Errc::invalid_argument, "direction grid index out of range");
  if (a == grid_size - 1) return 1.0;
  return -1.0 + 2.0 * a / (grid_size - 1);
}

struct EvalScenario {
  SystemConfig cfg;
  int subbands = 3;
  double snr_linear = 10.0;
  int direction_grid_size = 499;
  int n_trials = 200;
  std::uint64_t master_seed = 42;

  void validate() const {
    cfg.validate();
    detail::require(subbands >= 1 && cfg.n_subcarriers % subbands == 0, Errc::invalid_argument,
                    "subband count must divide M");
    detail::require(std::isfinite(snr_linear) && snr_linear > 0.0, Errc::invalid_argument, "snr must be positive");
    detail::require(direction_grid_size >= 2, Errc::invalid_argument, "direction grid needs at least 2 points");
    detail::require(n_trials >= 1, Errc::invalid_argument, "need at least one trial");
  }

  double upper_bound() const { return std::log2(1.0 + cfg.n_antennas * snr_linear); }
};

inline double snr_from_db(double db) { return std::pow(10.0, db / 10.0); }

inline double spectral_efficiency(const ArrayConfig& phi, const DirectionMap& map, int k, double snr,
                                  const SystemConfig& cfg) {
  const int s = subband_of(k, map.subbands(), cfg.n_subcarriers);
  return std::log2(1.0 + std::norm(gain_at(phi, map.directions[static_cast<std::size_t>(s)], k, cfg)) * snr);
}

// Directions of trial t, drawn i.i.d. from the scenario's direction grid.
inline DirectionMap draw_directions(const EvalScenario& sc, int trial) {
  SplitMix64 rng(trial_seed(sc.master_seed, static_cast<std::uint64_t>(trial)));
  DirectionMap map;
  map.directions.reserve(static_cast<std::size_t>(sc.subbands));
  for (int g = 0; g < sc.subbands; ++g)
    map.directions.push_back(
        grid_direction(static_cast<int>(rng.below(static_cast<std::uint64_t>(sc.direction_grid_size))),
                       sc.direction_grid_size));
  return map;
}

struct EvalReport {
  EvalScenario scenario;
  std::string synthesizer;
  std::vector<DirectionMap> maps;      // per trial
  std::vector<double> se;              // n_trials x M, row-major; NaN rows for failed trials
  std::vector<std::string> failures;   // per trial; empty when the trial succeeded
  double upper_bound = 0.0;

  int trials() const { return static_cast<int>(maps.size()); }
  int subcarriers() const { return scenario.cfg.n_subcarriers; }
  bool failed(int t) const { return !failures[static_cast<std::size_t>(t)].empty(); }
  double at(int t, int k) const {
    return se[static_cast<std::size_t>(t) * static_cast<std::size_t>(subcarriers()) + static_cast<std::size_t>(k)];
  }
  int failed_count() const {
    return static_cast<int>(std::ranges::count_if(failures, [](const std::string& s) { return !s.empty(); }));
  }
};

inline EvalReport monte_carlo(const EvalScenario& sc, const Synthesizer& synth, std::string name = "custom",
                              unsigned threads = worker_count()) {
  sc.validate();
  EvalReport rep;
  rep.scenario = sc;
  rep.synthesizer = std::move(name);
  rep.upper_bound = sc.upper_bound();
  const auto trials = static_cast<std::size_t>(sc.n_trials);
  const auto m = static_cast<std::size_t>(sc.cfg.n_subcarriers);
  rep.maps.resize(trials);
  rep.failures.resize(trials);
  rep.se.assign(trials * m, std::numeric_limits<double>::quiet_NaN());

  parallel_for(
      trials,
      [&](std::size_t t) {
        auto map = draw_directions(sc, static_cast<int>(t));
        try {
          const ArrayConfig phi = synth(map);
          for (int k = 0; k < sc.cfg.n_subcarriers; ++k)
            rep.se[t * m + static_cast<std::size_t>(k)] = spectral_efficiency(phi, map, k, sc.snr_linear, sc.cfg);
        } catch (const std::exception& e) {
          std::fill_n(rep.se.begin() + static_cast<std::ptrdiff_t>(t * m), m, std::numeric_limits<double>::quiet_NaN());
          rep.failures[t] = e.what()[0] ? e.what() : "synthesis failed";
        }
        rep.maps[t] = std::move(map);
      },
      threads);
  return rep;
}

namespace detail {

inline void require_samples(const EvalReport& rep) {
  require(rep.trials() > rep.failed_count(), Errc::invalid_argument, "report has no successful trials");
}

}  // namespace detail

// Mean SE over successful trials and the subcarriers of each subband.
inline std::vector<double> ase_per_subband(const EvalReport& rep) {
  detail::require_samples(rep);
  const int g_count = rep.scenario.subbands;
  const int m = rep.subcarriers();
  std::vector<double> sum(static_cast<std::size_t>(g_count), 0.0);
  int used = 0;
  for (int t = 0; t < rep.trials(); ++t) {
    if (rep.failed(t)) continue;
    ++used;
    for (int k = 0; k < m; ++k) sum[static_cast<std::size_t>(subband_of(k, g_count, m))] += rep.at(t, k);
  }
  const double per_subband = static_cast<double>(used) * (m / g_count);
  for (auto& s : sum) s /= per_subband;
  return sum;
}

inline std::vector<double> ase_per_subcarrier(const EvalReport& rep) {
  detail::require_samples(rep);
  const int m = rep.subcarriers();
  std::vector<double> sum(static_cast<std::size_t>(m), 0.0);
  int used = 0;
  for (int t = 0; t < rep.trials(); ++t) {
    if (rep.failed(t)) continue;
    ++used;
    for (int k = 0; k < m; ++k) sum[static_cast<std::size_t>(k)] += rep.at(t, k);
  }
  for (auto& s : sum) s /= used;
  return sum;
}

// (max - min) / min over a vector of averages.
inline double relative_spread(const std::vector<double>& v) {
  detail::require(!v.empty(), Errc::invalid_argument, "empty vector");
  const auto [lo, hi] = std::ranges::minmax_element(v);
  return (*hi - *lo) / *lo;
}

class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values) : sorted_(std::move(values)) {
    detail::require(!sorted_.empty(), Errc::invalid_argument, "ECDF of an empty sample");
    std::ranges::sort(sorted_);
  }

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  // Fraction of samples <= x.
  double cdf(double x) const {
    return static_cast<double>(std::ranges::upper_bound(sorted_, x) - sorted_.begin()) / static_cast<double>(size());
  }

  // Fraction of samples < x.
  double fraction_below(double x) const {
    return static_cast<double>(std::ranges::lower_bound(sorted_, x) - sorted_.begin()) / static_cast<double>(size());
  }

  // Smallest sample whose CDF is >= q.
  double quantile(double q) const {
    detail::require(q >= 0.0 && q <= 1.0, Errc::invalid_argument, "quantile level must lie in [0, 1]");
    const double rank = std::ceil(q * static_cast<double>(size()));
    const auto i = static_cast<std::size_t>(std::clamp(rank - 1.0, 0.0, static_cast<double>(size() - 1)));
    return sorted_[i];
  }

 private:
  std::vector<double> sorted_;
};

inline Ecdf ecdf(const EvalReport& rep) {
  detail::require_samples(rep);
  std::vector<double> v;
  v.reserve(rep.se.size());
  for (int t = 0; t < rep.trials(); ++t) {
    if (rep.failed(t)) continue;
    for (int k = 0; k < rep.subcarriers(); ++k) v.push_back(rep.at(t, k));
  }
  return Ecdf(std::move(v));
}

// One row per (trial, subcarrier); trial, m and subband are one-based.
inline void write_csv(const EvalReport& rep, std::ostream& out) {
  out << "trial,m,subband,direction,se_bps_hz\n";
  const int m = rep.subcarriers();
  const int g_count = rep.scenario.subbands;
  char line[128];
  for (int t = 0; t < rep.trials(); ++t) {
    const auto& dirs = rep.maps[static_cast<std::size_t>(t)].directions;
    for (int k = 0; k < m; ++k) {
      const int s = subband_of(k, g_count, m);
      const double se = rep.at(t, k);
      const int len = std::isnan(se) ? std::snprintf(line, sizeof line, "%d,%d,%d,%.17g,nan\n", t + 1, k + 1, s + 1,
                                                     dirs[static_cast<std::size_t>(s)])
                                     : std::snprintf(line, sizeof line, "%d,%d,%d,%.17g,%.17g\n", t + 1, k + 1, s + 1,
                                                     dirs[static_cast<std::size_t>(s)], se);
      out.write(line, len);
    }
  }
}

inline constexpr double kSeThreshold = 6.0;

inline nlohmann::json summary_json(const EvalReport& rep) {
  using nlohmann::json;
  const auto& sc = rep.scenario;
  const auto subband = ase_per_subband(rep);
  const auto subcarrier = ase_per_subcarrier(rep);
  const auto dist = ecdf(rep);
  json ratios = json::array();
  for (double a : subband) ratios.push_back(a / rep.upper_bound);
  json quantiles = json::object();
  for (int q : {1, 5, 10, 50, 90}) {
    char key[8];
    std::snprintf(key, sizeof key, "p%02d", q);
    quantiles[key] = dist.quantile(q / 100.0);
  }
  // ECDF sampled at every percent, enough to redraw the curve.
  json curve = json::array();
  for (int i = 0; i <= 100; ++i) curve.push_back(json::array({dist.quantile(i / 100.0), i / 100.0}));
  json failed = json::array();
  for (int t = 0; t < rep.trials(); ++t)
    if (rep.failed(t)) failed.push_back({{"trial", t + 1}, {"error", rep.failures[static_cast<std::size_t>(t)]}});
  return {
      {"synthesizer", rep.synthesizer},
      {"config",
       {{"n", sc.cfg.n_antennas},
        {"m", sc.cfg.n_subcarriers},
        {"fc_hz", sc.cfg.carrier_hz},
        {"bw_hz", sc.cfg.bandwidth_hz},
        {"subbands", sc.subbands},
        {"snr_linear", sc.snr_linear},
        {"direction_grid_size", sc.direction_grid_size},
        {"trials", sc.n_trials}}},
      {"rng", {{"algorithm", kRngAlgorithm}, {"master_seed", sc.master_seed}, {"trial_seed", "splitmix64(master_seed + t * 0x9E3779B97F4A7C15).next()"}}},
      {"upper_bound", rep.upper_bound},
      {"ase_per_subband", subband},
      {"ase_ratio_per_subband", ratios},
      {"ase_per_subcarrier", subcarrier},
      {"subcarrier_spread", relative_spread(subcarrier)},
      {"quantiles", quantiles},
      {"fraction_below_6", dist.fraction_below(kSeThreshold)},
      {"ecdf", curve},
      {"failed_trials", failed},
  };
}

struct BenchResult {
  std::string name;
  int calls = 0;
  double mean_seconds = 0.0;
};

// Mean wall time per call over `calls` synthesis calls, after `warmup`
// untimed calls. Maps cycle through `maps`.
inline BenchResult runtime_bench(const std::string& name, const Synthesizer& synth,
                                 const std::vector<DirectionMap>& maps, int calls, int warmup = 3) {
  detail::require(!maps.empty() && calls >= 1 && warmup >= 0, Errc::invalid_argument, "bench needs maps and calls");
  double sink = 0.0;
  for (int i = 0; i < warmup; ++i) sink += synth(maps[static_cast<std::size_t>(i) % maps.size()]).delays_s[0];
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < calls; ++i) sink += synth(maps[static_cast<std::size_t>(i) % maps.size()]).delays_s[0];
  const auto stop = std::chrono::steady_clock::now();
  volatile double keep = sink;
  (void)keep;
  return {name, calls, std::chrono::duration<double>(stop - start).count() / calls};
}

}  // namespace ttdbeam
