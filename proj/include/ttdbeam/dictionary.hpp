#pragma once

// Generator dictionary: TTD approximations of the two-subband split pattern
// [0, delta] over the operating band, one per offset delta.
//
// Binary layout (all fields little-endian):
//   char[4]  magic "TTDD"
//   uint32   version (1)
//   uint32   N, A, D, M
//   float64  fc_hz, bw_hz
//   float64  offsets[D]
//   float64  configs[D][2N]   (N delays in seconds, then N phases in radians)

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ttdbeam/core.hpp"
#include "ttdbeam/generators.hpp"
#include "ttdbeam/parallel.hpp"
#include "ttdbeam/solvers.hpp"
#include "ttdbeam/splitbeam.hpp"

namespace ttdbeam {

inline constexpr std::array<char, 4> kDictMagic{'T', 'T', 'D', 'D'};
inline constexpr std::uint32_t kDictVersion = 1;
inline constexpr std::size_t kDictHeaderBytes = 4 + 5 * 4 + 2 * 8;

struct GeneratorDictionary {
  SystemConfig meta;
  int direction_grid_size = 0;
  std::vector<double> offsets;
  std::vector<ArrayConfig> configs;

  std::size_t size() const { return offsets.size(); }
  bool empty() const { return offsets.empty(); }
};

inline constexpr double kMaxOffset = 2.0;

// Offsets 2k / (A - 1) for k = -(A-1) .. (A-1): the 2A - 1 distinct
// differences of two points of the A-point direction grid over [-1, 1].
inline std::vector<double> offset_grid(int direction_grid_size) {
  detail::require(direction_grid_size >= 2, Errc::invalid_argument, "direction grid needs at least 2 points");
  const int half = direction_grid_size - 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * half + 1));
  for (int k = -half; k <= half; ++k) out.push_back(kMaxOffset * k / half);
  out.front() = -kMaxOffset;
  out.back() = kMaxOffset;
  return out;
}

struct CenteringResult {
  ArrayConfig config;
  bool degenerate = false;
  int peak_low = 0;   // argmax_k |P(0, k)| of the returned config
  int peak_high = 0;  // argmax_k |P(delta, k)| of the returned config
  double bandwidth_hz = 0.0;  // BW times the accumulated scale factor
  int passes = 0;
};

namespace detail {

inline std::pair<int, int> split_peaks(const ArrayConfig& phi, double delta, const SystemConfig& cfg) {
  int low = 0;
  int high = 0;
  double best_low = -1.0;
  double best_high = -1.0;
  for (int k = 0; k < cfg.n_subcarriers; ++k) {
    const double l = std::abs(steered_gain(phi, 0.0, k, cfg));
    const double h = std::abs(steered_gain(phi, delta, k, cfg));
    if (l > best_low) {
      best_low = l;
      low = k;
    }
    if (h > best_high) {
      best_high = h;
      high = k;
    }
  }
  return {low, high};
}

}  // namespace detail

// One centering step: with peaks k1 (towards 0) and k2 (towards delta),
// rescale by alpha = M / (2 |k2 - k1|) about the midpoint of the two peak
// frequencies, which moves to f_c. Degenerate (k1 == k2) returns the input.
inline CenteringResult center_once(const ArrayConfig& phi, double delta, const SystemConfig& cfg) {
  cfg.validate();
  check_config(phi, cfg);
  CenteringResult out;
  std::tie(out.peak_low, out.peak_high) = detail::split_peaks(phi, delta, cfg);
  const int separation = std::abs(out.peak_high - out.peak_low);
  out.bandwidth_hz = cfg.bandwidth_hz;
  if (separation == 0) {
    out.config = phi;
    out.degenerate = true;
    return out;
  }
  const double alpha = static_cast<double>(cfg.n_subcarriers) / (2.0 * separation);
  const double midpoint = 0.5 * (cfg.subcarrier_freq(out.peak_low) + cfg.subcarrier_freq(out.peak_high));
  out.bandwidth_hz = cfg.bandwidth_hz * alpha;
  out.config = rebase_band(phi, midpoint, cfg.carrier_hz, alpha);
  out.passes = 1;
  return out;
}

inline constexpr int kMaxCenteringPasses = 8;

// Repeats center_once until the peaks sit at the two subband centers
// (zero-based M/4 - 1 and 3M/4 - 1, where the step is the identity). Band
// rescaling leaves the towards-0 peak exactly in place but moves the
// towards-delta peak slightly, because the steering phase scales with f / f_c
// rather than with the remapped frequency; a few passes absorb that.
inline CenteringResult postprocess_center(const ArrayConfig& phi, double delta, const SystemConfig& cfg) {
  auto step = center_once(phi, delta, cfg);
  if (step.degenerate) return step;
  CenteringResult out = step;
  const int m = cfg.n_subcarriers;
  for (int pass = 1; pass < kMaxCenteringPasses; ++pass) {
    const auto [low, high] = detail::split_peaks(out.config, delta, cfg);
    out.peak_low = low;
    out.peak_high = high;
    const bool centered = 2 * std::abs(high - low) == m && low + high == m - 2;
    if (centered || low == high) return out;
    step = center_once(out.config, delta, cfg);
    out.config = std::move(step.config);
    out.bandwidth_hz *= step.bandwidth_hz / cfg.bandwidth_hz;
    ++out.passes;
  }
  std::tie(out.peak_low, out.peak_high) = detail::split_peaks(out.config, delta, cfg);
  return out;
}

struct DictionaryBuild {
  GeneratorDictionary dictionary;
  std::vector<double> degenerate_offsets;
  // Offsets whose gain towards the assigned direction drops below
  // fidelity_threshold * sqrt(N) somewhere in the assigned half-band.
  std::vector<double> low_fidelity_offsets;
  double fidelity_threshold = 0.5;
};

// Minimum of |gain| / sqrt(N) over the assigned direction of each half-band.
inline double split_fidelity(const ArrayConfig& phi, double delta, const SystemConfig& cfg) {
  const int half = cfg.n_subcarriers / 2;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.n_subcarriers; ++k) {
    const double dir = k < half ? 0.0 : delta;
    worst = std::min(worst, std::abs(detail::steered_gain(phi, dir, k, cfg)));
  }
  return worst / std::sqrt(static_cast<double>(cfg.n_antennas));
}

inline DictionaryBuild build_dictionary(const SystemConfig& cfg, int direction_grid_size, const SolverParams& params,
                                        unsigned threads = worker_count()) {
  cfg.validate();
  params.validate();
  detail::require(cfg.n_subcarriers % 2 == 0, Errc::invalid_argument,
                  "dictionary entries split the band in two; M must be even");
  DictionaryBuild build;
  auto& dict = build.dictionary;
  dict.meta = cfg;
  dict.direction_grid_size = direction_grid_size;
  dict.offsets = offset_grid(direction_grid_size);
  dict.configs.assign(dict.offsets.size(), ArrayConfig::zeros(cfg.n_antennas));
  std::vector<char> degenerate(dict.offsets.size(), 0);
  std::vector<double> fidelity(dict.offsets.size(), 1.0);

  parallel_for(
      dict.offsets.size(),
      [&](std::size_t i) {
        const double delta = dict.offsets[i];
        if (delta == 0.0) return;
        std::vector<double> psi(static_cast<std::size_t>(cfg.n_subcarriers), 0.0);
        std::fill(psi.begin() + cfg.n_subcarriers / 2, psi.end(), delta);
        const auto target = detail::steering_precoder(psi, cfg);
        const auto fitted = jpta_approx(target, params, cfg);
        auto centered = postprocess_center(canonical_delays(fitted, cfg), delta, cfg);
        degenerate[i] = centered.degenerate ? 1 : 0;
        fidelity[i] = split_fidelity(centered.config, delta, cfg);
        dict.configs[i] = std::move(centered.config);
      },
      threads);

  for (std::size_t i = 0; i < dict.offsets.size(); ++i) {
    if (degenerate[i]) {
      build.degenerate_offsets.push_back(dict.offsets[i]);
    } else if (fidelity[i] < build.fidelity_threshold) {
      build.low_fidelity_offsets.push_back(dict.offsets[i]);
    }
  }
  return build;
}

// Nearest entry; exact midpoints resolve to the smaller offset.
inline const ArrayConfig& lookup(const GeneratorDictionary& dict, double delta) {
  detail::require(!dict.empty(), Errc::invalid_argument, "dictionary is empty");
  detail::require(std::isfinite(delta) && std::abs(delta) <= kMaxOffset, Errc::invalid_argument,
                  "offset must lie in [-2, 2]");
  const auto& off = dict.offsets;
  const auto it = std::lower_bound(off.begin(), off.end(), delta);
  if (it == off.begin()) return dict.configs.front();
  if (it == off.end()) return dict.configs.back();
  const auto hi = static_cast<std::size_t>(it - off.begin());
  const std::size_t lo = hi - 1;
  return (delta - off[lo] <= off[hi] - delta) ? dict.configs[lo] : dict.configs[hi];
}

namespace detail {

class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>(bits >> (8 * i)));
  }
  void raw(std::span<const char> s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  std::vector<unsigned char> take() { return std::move(bytes_); }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return std::bit_cast<double>(bits);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::span<const unsigned char> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const {
    require(bytes_.size() - pos_ >= n, Errc::corrupt_file, "dictionary file is truncated");
  }

  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<unsigned char> serialize(const GeneratorDictionary& dict) {
  const auto n = static_cast<std::size_t>(dict.meta.n_antennas);
  detail::require(dict.configs.size() == dict.offsets.size(), Errc::dimension_mismatch,
                  "dictionary offsets and configs differ in length");
  detail::ByteWriter w;
  w.raw(kDictMagic);
  w.u32(kDictVersion);
  w.u32(static_cast<std::uint32_t>(dict.meta.n_antennas));
  w.u32(static_cast<std::uint32_t>(dict.direction_grid_size));
  w.u32(static_cast<std::uint32_t>(dict.offsets.size()));
  w.u32(static_cast<std::uint32_t>(dict.meta.n_subcarriers));
  w.f64(dict.meta.carrier_hz);
  w.f64(dict.meta.bandwidth_hz);
  for (double d : dict.offsets) w.f64(d);
  for (const auto& c : dict.configs) {
    detail::require(c.size() == n, Errc::dimension_mismatch, "dictionary entry length does not match N");
    for (double t : c.delays_s) w.f64(t);
    for (double p : c.phases_rad) w.f64(p);
  }
  return w.take();
}

inline GeneratorDictionary deserialize(std::span<const unsigned char> bytes) {
  detail::require(bytes.size() >= kDictHeaderBytes, Errc::corrupt_file, "dictionary file is truncated");
  detail::ByteReader r(bytes);
  const auto magic = r.take(4);
  detail::require(std::equal(magic.begin(), magic.end(), kDictMagic.begin(),
                             [](unsigned char a, char b) { return a == static_cast<unsigned char>(b); }),
                  Errc::corrupt_file, "bad dictionary magic");
  detail::require(r.u32() == kDictVersion, Errc::corrupt_file, "unsupported dictionary version");
  GeneratorDictionary dict;
  const std::uint32_t n = r.u32();
  const std::uint32_t a = r.u32();
  const std::uint32_t d = r.u32();
  const std::uint32_t m = r.u32();
  dict.meta.carrier_hz = r.f64();
  dict.meta.bandwidth_hz = r.f64();
  detail::require(n >= 1 && m >= 1 && n <= (1u << 20) && m <= (1u << 24) && a >= 2, Errc::corrupt_file,
                  "dictionary header has invalid dimensions");
  dict.meta.n_antennas = static_cast<int>(n);
  dict.meta.n_subcarriers = static_cast<int>(m);
  dict.direction_grid_size = static_cast<int>(a);
  try {
    dict.meta.validate();
  } catch (const Error&) {
    throw Error(Errc::corrupt_file, "dictionary header has invalid carrier/bandwidth");
  }
  const std::uint64_t payload = 8ull * d * (1ull + 2ull * n);
  detail::require(r.remaining() == payload, Errc::corrupt_file, "dictionary payload length does not match header");
  dict.offsets.resize(d);
  for (auto& off : dict.offsets) off = r.f64();
  dict.configs.reserve(d);
  for (std::uint32_t i = 0; i < d; ++i) {
    auto c = ArrayConfig::zeros(static_cast<int>(n));
    for (auto& t : c.delays_s) t = r.f64();
    for (auto& p : c.phases_rad) p = r.f64();
    dict.configs.push_back(std::move(c));
  }
  for (std::size_t i = 1; i < dict.offsets.size(); ++i)
    detail::require(dict.offsets[i] > dict.offsets[i - 1], Errc::corrupt_file, "dictionary offsets are not increasing");
  return dict;
}

// Compares every persisted field bit for bit.
inline bool bitwise_equal(const GeneratorDictionary& a, const GeneratorDictionary& b) {
  return serialize(a) == serialize(b);
}

inline void save(const GeneratorDictionary& dict, const std::filesystem::path& path) {
  const auto bytes = serialize(dict);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  detail::require(static_cast<bool>(out), Errc::io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  detail::require(static_cast<bool>(out), Errc::io, "failed writing '" + path.string() + "'");
}

inline GeneratorDictionary load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  detail::require(static_cast<bool>(in), Errc::io, "cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  detail::require(!in.bad(), Errc::io, "failed reading '" + path.string() + "'");
  return deserialize(bytes);
}

// Human-readable mirror of the binary header.
inline nlohmann::json sidecar_json(const GeneratorDictionary& dict) {
  return {
      {"magic", std::string(kDictMagic.begin(), kDictMagic.end())},
      {"version", kDictVersion},
      {"n", dict.meta.n_antennas},
      {"a", dict.direction_grid_size},
      {"d", dict.size()},
      {"m", dict.meta.n_subcarriers},
      {"fc_hz", dict.meta.carrier_hz},
      {"bw_hz", dict.meta.bandwidth_hz},
      {"file_bytes", kDictHeaderBytes + 8 * dict.size() * (1 + 2 * static_cast<std::size_t>(dict.meta.n_antennas))},
  };
}

}  // namespace ttdbeam
