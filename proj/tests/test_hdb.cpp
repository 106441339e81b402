#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ttdbeam/hdb.hpp"

using namespace ttdbeam;

namespace {

const SystemConfig kFull{16, 1200, 28e9, 3e9};
constexpr int kGrid = 101;

class Hdb : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dict_ = new GeneratorDictionary(build_dictionary(kFull, kGrid, SolverParams::for_system(kFull)).dictionary);
  }
  static void TearDownTestSuite() {
    delete dict_;
    dict_ = nullptr;
  }
  static const GeneratorDictionary& dict() { return *dict_; }

 private:
  static GeneratorDictionary* dict_;
};

GeneratorDictionary* Hdb::dict_ = nullptr;

double grid_point(std::mt19937_64& rng) {
  return -1.0 + 2.0 * std::uniform_int_distribution<int>(0, kGrid - 1)(rng) / (kGrid - 1);
}

// Mean |gain| / sqrt(N) towards the assigned direction over subband s.
double subband_gain(const ArrayConfig& phi, const DirectionMap& map, int s) {
  const int width = kFull.n_subcarriers / map.subbands();
  double sum = 0;
  for (int k = s * width; k < (s + 1) * width; ++k)
    sum += std::abs(oracle::config_gain(phi, kFull, map.directions[static_cast<std::size_t>(s)], k + 1));
  return sum / width / 4.0;
}

}  // namespace

TEST_F(Hdb, SingleSubbandIsConstantDirection) {
  for (double psi : {-1.0, -0.3, 0.0, 0.58, 1.0}) EXPECT_EQ(synthesize({{psi}}, dict(), kFull), constant_direction_config(psi, kFull));
}

TEST_F(Hdb, SumOfGeneratorsIsProductOfPrecoders) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const DirectionMap map{{grid_point(rng), grid_point(rng), grid_point(rng)}};
    const auto parts = generator_configs(map, dict(), kFull);
    ASSERT_EQ(parts.size(), 3u);
    const auto total = omega1(synthesize(map, dict(), kFull), kFull);
    for (int n = 0; n < 16; ++n)
      for (int k = 0; k < 1200; k += 7) {
        const cdouble product = oracle::precoder(parts[0], kFull, n, k + 1) * oracle::precoder(parts[1], kFull, n, k + 1) *
                                oracle::precoder(parts[2], kFull, n, k + 1);
        EXPECT_LT(std::abs(total(n, k) - 16.0 * product), 1e-9);
      }
  }
}

TEST_F(Hdb, FirstGeneratorIsConstantAndLaterOnesAreRescaledEntries) {
  const DirectionMap map{{-0.4, 0.4, -0.1}};
  const auto parts = generator_configs(map, dict(), kFull);
  EXPECT_EQ(parts[0], constant_direction_config(-0.4, kFull));
  const auto d = raw_deltas(map);
  for (int g = 1; g < 3; ++g) {
    const auto band = generator_band(g, 3, kFull);
    EXPECT_EQ(parts[static_cast<std::size_t>(g)], scale_shift(lookup(dict(), d[static_cast<std::size_t>(g)]), band.center_hz, band.bandwidth_hz, kFull));
  }
}

TEST_F(Hdb, MonotoneMapHasHighGain) {
  const DirectionMap map{{0.0, 0.2, 0.4}};
  const auto phi = synthesize(map, dict(), kFull);
  for (int s = 0; s < 3; ++s) EXPECT_GE(subband_gain(phi, map, s), 0.7) << s;
}

TEST_F(Hdb, SubbandPowerPeaksAtAssignedDirection) {
  const DirectionMap map{{-0.4, 0.4, -0.1}};
  const auto phi = synthesize(map, dict(), kFull);
  const auto grid = PsiGrid::uniform(kGrid);
  const auto p = omega2(omega1(phi, kFull), kFull, grid);
  for (int s = 0; s < 3; ++s) {
    std::size_t best = 0;
    double best_power = -1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double power = 0;
      for (int k = 400 * s; k < 400 * (s + 1); ++k) power += std::norm(p(i, k));
      if (power > best_power) {
        best_power = power;
        best = i;
      }
    }
    EXPECT_NEAR(grid[best], map.directions[static_cast<std::size_t>(s)], 2 * grid.max_step() + 1e-12) << s;
  }
}

// Power-summed argmax over each half-band of every stored entry whose offset
// has a unique peak (beyond 2 f_c / f_max - 1 a grating lobe of equal height
// enters [-1, 1]); the halves point at 0 and at the offset.
TEST_F(Hdb, DictionaryEntriesSplitTowardsZeroAndOffset) {
  const auto grid = PsiGrid::uniform(kGrid);
  const double unique = 2.0 * kFull.carrier_hz / kFull.subcarrier_freq(kFull.n_subcarriers - 1) - 1.0;
  int checked = 0;
  for (std::size_t i = 0; i < dict().offsets.size(); ++i) {
    const double delta = dict().offsets[i];
    if (std::abs(delta) > unique) continue;
    const auto p = omega2(omega1(dict().configs[i], kFull), kFull, grid);
    for (int half = 0; half < 2; ++half) {
      std::size_t best = 0;
      double best_power = -1;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        double power = 0;
        for (int k = 600 * half; k < 600 * (half + 1); ++k) power += std::norm(p(j, k));
        if (power > best_power) {
          best_power = power;
          best = j;
        }
      }
      EXPECT_NEAR(grid[best], half ? delta : 0.0, 2 * grid.max_step() + 1e-12) << delta;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 2 * static_cast<int>(unique * (kGrid - 1) / 2) + 1);
}

// Every subband of random grid maps keeps most of its power towards its
// direction: mean gain over the subband at least half of sqrt(N).
TEST_F(Hdb, RandomMapsKeepPerSubbandGain) {
  std::mt19937_64 rng(22);
  int weak = 0, total = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const DirectionMap map{{grid_point(rng), grid_point(rng), grid_point(rng)}};
    const auto phi = synthesize(map, dict(), kFull);
    for (int s = 0; s < 3; ++s, ++total) weak += subband_gain(phi, map, s) < 0.5;
  }
  EXPECT_LE(weak, total / 20) << weak << " of " << total;
}

TEST_F(Hdb, RejectsIncompatibleDictionary) {
  GeneratorDictionary other = dict();
  other.meta.n_subcarriers = 600;
  try {
    synthesize({{0.1, 0.2}}, other, kFull);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::incompatible);
  }
  try {
    synthesize({{0.1, 0.2}}, dict(), SystemConfig{8, 1200, 28e9, 3e9});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::incompatible);
  }
  EXPECT_THROW(synthesize({{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}}, dict(), kFull), Error);  // 7 does not divide M
}

TEST_F(Hdb, SynthesizerAdapter) {
  const auto synth = make_hdb_synthesizer(dict());
  const DirectionMap map{{0.3, -0.6}};
  EXPECT_EQ(synth(map), synthesize(map, dict(), kFull));
}
