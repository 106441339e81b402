#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ttdbeam/splitbeam.hpp"

using namespace ttdbeam;

namespace {

const SystemConfig kFull{16, 1200, 28e9, 3e9};

}  // namespace

TEST(ExpandDirections, BlockExpansion) {
  const SystemConfig cfg{16, 6, 28e9, 3e9};
  EXPECT_EQ(expand_directions({{-0.4, 0.4, -0.1}}, cfg), (std::vector<double>{-0.4, -0.4, 0.4, 0.4, -0.1, -0.1}));
  EXPECT_EQ(expand_directions({{0.5}}, {16, 4, 28e9, 3e9}), (std::vector<double>(4, 0.5)));
  const std::vector<double> phi{0.1, -0.2, 0.3, -0.4, 0.5, 0.6};
  EXPECT_EQ(expand_directions({phi}, cfg), phi);
}

TEST(ExpandDirections, RejectsNonDivisor) {
  EXPECT_THROW(expand_directions({{0.1, 0.2, 0.3, 0.4}}, {16, 6, 28e9, 3e9}), Error);
  EXPECT_THROW(expand_directions({{1.2}}, kFull), Error);
  EXPECT_THROW(expand_directions({{}}, kFull), Error);
}

TEST(SubbandOf, Boundaries) {
  // One-based m = 400 / 401 / 1200 are zero-based k = 399 / 400 / 1199.
  EXPECT_EQ(subband_of(399, 3, 1200), 0);
  EXPECT_EQ(subband_of(400, 3, 1200), 1);
  EXPECT_EQ(subband_of(1199, 3, 1200), 2);
  for (int k = 0; k < 1200; k += 17) EXPECT_EQ(subband_of(k, 1, 1200), 0);
  EXPECT_THROW(subband_of(1200, 3, 1200), Error);
  EXPECT_THROW(subband_of(0, 7, 1200), Error);
}

TEST(IdealSplitPrecoder, BroadsideEqualsZeroConfig) {
  const auto v = ideal_split_precoder({{0.0}}, kFull);
  const auto z = omega1(ArrayConfig::zeros(16), kFull);
  for (std::size_t i = 0; i < v.data().size(); ++i) EXPECT_LT(std::abs(v.data()[i] - z.data()[i]), 1e-15);
}

TEST(IdealSplitPrecoder, UnitModulusAndFormula) {
  const DirectionMap map{{-0.4, 0.4, -0.1}};
  const auto v = ideal_split_precoder(map, kFull);
  for (int n = 0; n < 16; ++n)
    for (int k = 0; k < 1200; k += 13) {
      EXPECT_NEAR(std::abs(v(n, k)), 0.25, 1e-12);
      const double psi = map.directions[k / 400];
      const double arg = oracle::pi * n * psi * oracle::freq(kFull, k + 1) / kFull.carrier_hz;
      EXPECT_LT(std::abs(v(n, k) - 0.25 * cdouble(std::cos(arg), std::sin(arg))), 1e-12);
    }
}

TEST(IdealSplitPrecoder, PeaksAtAssignedDirectionsWithFullGain) {
  const DirectionMap map{{-0.4, 0.4, -0.1}};
  const auto grid = PsiGrid::uniform(1001);
  const auto p = omega2(ideal_split_precoder(map, kFull), kFull, grid);
  for (int k = 0; k < 1200; k += 5) {
    const double want = map.directions[k / 400];
    EXPECT_NEAR(p.peak_direction(k), want, 1e-9);
    EXPECT_NEAR(std::abs(p(p.argmax(k), k)), 4.0, 1e-9);
  }
}

TEST(DirichletGain, PeakAndFirstNull) {
  for (int k : {0, 599, 1199}) {
    EXPECT_NEAR(std::abs(dirichlet_gain(0.0, k, kFull) - cdouble(4.0, 0.0)), 0.0, 1e-12);
    const double null = 2.0 * kFull.carrier_hz / (16 * kFull.subcarrier_freq(k));
    EXPECT_LT(std::abs(dirichlet_gain(null, k, kFull)), 1e-9);
  }
}

TEST(DirichletGain, MatchesIdealPatternMagnitude) {
  const DirectionMap map{{-0.4, 0.4, -0.1}};
  const auto grid = PsiGrid::uniform(101);
  const auto p = omega2(ideal_split_precoder(map, kFull), kFull, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int k = 0; k < 1200; k += 31) {
      const double off = grid[i] - map.directions[k / 400];
      EXPECT_NEAR(std::abs(p(i, k)), std::abs(dirichlet_gain(off, k, kFull)), 1e-10);
    }
}

// Composing two ideal patterns through the antenna domain (sqrt N times the
// elementwise product) steers each subcarrier to the sum of the directions.
// Directions stay below 2 f_c / f_max - 1, beyond which a grating lobe of
// equal height enters [-1, 1] and the argmax is ambiguous.
TEST(IdealSplitProperty, DirectionsAdd) {
  const SystemConfig cfg{16, 120, 28e9, 3e9};
  const double unique = 2.0 * cfg.carrier_hz / cfg.subcarrier_freq(cfg.n_subcarriers - 1) - 1.0 - 0.01;
  const auto grid = PsiGrid::uniform(1001);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-unique, unique);
  for (int trial = 0; trial < 20; ++trial) {
    DirectionMap a, b;
    while (a.directions.size() < 3) {
      const double x = u(rng), y = u(rng);
      if (std::abs(x + y) > unique) continue;
      a.directions.push_back(x);
      b.directions.push_back(y);
    }
    const auto va = ideal_split_precoder(a, cfg);
    const auto vb = ideal_split_precoder(b, cfg);
    PrecoderMatrix vab(cfg.n_antennas, cfg.n_subcarriers);
    for (std::size_t i = 0; i < vab.data().size(); ++i) vab.data()[i] = 4.0 * va.data()[i] * vb.data()[i];
    const auto pa = omega2(va, cfg, grid), pb = omega2(vb, cfg, grid), pab = omega2(vab, cfg, grid);
    for (int k = 0; k < cfg.n_subcarriers; ++k) {
      const double sum = wrap_direction(pa.peak_direction(k) + pb.peak_direction(k));
      EXPECT_NEAR(pab.peak_direction(k), sum, grid.max_step() + 1e-12);
    }
  }
}

TEST(ParseDirectionList, Accepts) {
  EXPECT_EQ(parse_direction_list("-0.4,0.4,-0.1").directions, (std::vector<double>{-0.4, 0.4, -0.1}));
  EXPECT_EQ(parse_direction_list("0").directions, (std::vector<double>{0.0}));
  EXPECT_EQ(parse_direction_list(" 1 , -1 ").directions, (std::vector<double>{1.0, -1.0}));
  EXPECT_EQ(parse_direction_list("1e-1").directions, (std::vector<double>{0.1}));
}

TEST(ParseDirectionList, Rejects) {
  for (const char* bad : {"", ",", "0.1,", "abc", "0.1;0.2", "1.5", "nan", "0.1 0.2", "--1"}) {
    try {
      parse_direction_list(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::parse) << bad;
    }
  }
}
