#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "ttdbeam/io.hpp"
#include "ttdbeam/render.hpp"
#include "ttdbeam/solvers.hpp"

using namespace ttdbeam;

namespace {

const SystemConfig kSmall{8, 120, 28e9, 3e9};

Errc parse_error_of(const std::string& text) {
  try {
    config_from_json(parse_json(text));
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_argument;
}

nlohmann::json tiny_summary() {
  return {{"ase_per_subband", {6.5, 6.4, 6.6}},
          {"upper_bound", 7.33},
          {"ecdf", {{2.0, 0.0}, {6.0, 0.5}, {7.3, 1.0}}}};
}

}  // namespace

TEST(ConfigJson, RoundTripIsExact) {
  std::mt19937_64 rng(31);
  const auto phi = oracle::random_config(rng, 8);
  const auto j = config_to_json(phi, kSmall);
  for (const char* key : {"n", "delays_s", "phases_rad", "fc_hz", "bw_hz", "m"}) EXPECT_TRUE(j.contains(key)) << key;
  const auto [back, cfg] = config_from_json(parse_json(j.dump()));
  EXPECT_EQ(back, phi);
  EXPECT_EQ(cfg, kSmall);
}

TEST(ConfigJson, ParseErrors) {
  EXPECT_EQ(parse_error_of("{"), Errc::parse);
  EXPECT_EQ(parse_error_of("[]"), Errc::parse);
  EXPECT_EQ(parse_error_of(R"({"n":2,"m":4,"fc_hz":28e9,"bw_hz":3e9,"delays_s":[0,0]})"), Errc::parse);
  EXPECT_EQ(parse_error_of(R"({"n":2,"m":4,"fc_hz":28e9,"bw_hz":3e9,"delays_s":[0,0],"phases_rad":[0]})"), Errc::parse);
  EXPECT_EQ(parse_error_of(R"({"n":2,"m":4,"fc_hz":28e9,"bw_hz":3e9,"delays_s":[0,"x"],"phases_rad":[0,0]})"),
            Errc::parse);
  EXPECT_EQ(parse_error_of(R"({"n":0,"m":4,"fc_hz":28e9,"bw_hz":3e9,"delays_s":[],"phases_rad":[]})"), Errc::parse);
  EXPECT_EQ(parse_error_of(R"({"n":2,"m":4,"fc_hz":1e9,"bw_hz":3e9,"delays_s":[0,0],"phases_rad":[0,0]})"),
            Errc::parse);
  EXPECT_EQ(parse_error_of(R"({"n":2,"m":4,"fc_hz":28e9,"bw_hz":3e9,"delays_s":[0,0],"phases_rad":[0,0]})"),
            Errc::invalid_argument);  // valid
}

TEST(TextFiles, IoErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "ttdbeam_test_io";
  std::filesystem::create_directories(dir);
  write_text(dir / "a.txt", "hello");
  EXPECT_EQ(read_text(dir / "a.txt"), "hello");
  try {
    read_text(dir / "missing.txt");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io);
  }
  try {
    write_text(dir / "no" / "such" / "dir.txt", "x");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io);
  }
  std::filesystem::remove_all(dir);
}

TEST(Heatmap, BroadsideRowIsFullyBright) {
  const auto svg = render_heatmap(ArrayConfig::zeros(8), kSmall, {201, 300});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  // Row 100 of 201 is Psi = 0; all 120 columns at full gain merge into one run.
  EXPECT_NE(svg.find(R"(<rect x="70.0" y="220.0" width="240.0" height="2.0" fill="#ffffff"/>)"), std::string::npos);
  EXPECT_EQ(svg, render_heatmap(ArrayConfig::zeros(8), kSmall, {201, 300}));
}

TEST(Heatmap, SubsamplesWideBandsAndValidates) {
  const SystemConfig full{16, 1200, 28e9, 3e9};
  const auto svg = render_heatmap(constant_direction_config(0.5, full), full, {101, 300});
  // Psi = 0.5 is row 25 of 101; 300 columns wide.
  EXPECT_NE(svg.find(R"(<rect x="70.0" y="70.0" width="600.0" height="2.0" fill="#ffffff"/>)"), std::string::npos);
  EXPECT_THROW(render_heatmap(ArrayConfig::zeros(4), full), Error);
  EXPECT_THROW(render_heatmap(ArrayConfig::zeros(16), full, {1, 300}), Error);
}

TEST(SummaryPlot, DeterministicAndLabelled) {
  const auto svg = render_summary(tiny_summary());
  EXPECT_EQ(svg, render_summary(tiny_summary()));
  EXPECT_NE(svg.find("6.500"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
}

TEST(SummaryPlot, RejectsMalformedSummary) {
  for (const char* key : {"ase_per_subband", "upper_bound", "ecdf"}) {
    auto j = tiny_summary();
    j.erase(key);
    try {
      render_summary(j);
      ADD_FAILURE() << key;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::parse) << key;
    }
  }
  auto j = tiny_summary();
  j["ase_per_subband"] = nlohmann::json::array();
  EXPECT_THROW(render_summary(j), Error);
}
