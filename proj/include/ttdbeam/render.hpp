#pragma once

// Self-contained SVG output: beampattern heatmaps of array configs and
// ASE / ECDF charts of evaluation summaries. Numbers are printed with fixed
// precision so identical inputs give identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttdbeam/core.hpp"

namespace ttdbeam {

namespace svg {

inline void append(std::string& out, const char* fmt, auto... args) {
  char buf[512];
  const int n = std::snprintf(buf, sizeof buf, fmt, args...);
  out.append(buf, static_cast<std::size_t>(std::min<int>(n, sizeof buf - 1)));
}

inline std::string open(int width, int height) {
  std::string s;
  append(s,
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\" "
         "font-family=\"sans-serif\" font-size=\"11\">\n",
         width, height, width, height);
  append(s, "<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", width, height);
  return s;
}

inline void text(std::string& s, double x, double y, const std::string& body, const char* anchor = "middle") {
  append(s, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"%s\">", x, y, anchor);
  for (char c : body) {
    switch (c) {
      case '<': s += "&lt;"; break;
      case '>': s += "&gt;"; break;
      case '&': s += "&amp;"; break;
      default: s += c;
    }
  }
  s += "</text>\n";
}

struct Frame {
  double x0, y0, w, h;  // plot area in pixels
  double xmin, xmax, ymin, ymax;

  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

inline void axes(std::string& s, const Frame& f, const std::string& xlabel, const std::string& ylabel, int ticks = 5) {
  append(s, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n", f.x0, f.y0,
         f.w, f.h);
  char label[32];
  for (int i = 0; i <= ticks; ++i) {
    const double xv = f.xmin + (f.xmax - f.xmin) * i / ticks;
    const double yv = f.ymin + (f.ymax - f.ymin) * i / ticks;
    std::snprintf(label, sizeof label, "%.3g", xv);
    text(s, f.px(xv), f.y0 + f.h + 14, label);
    std::snprintf(label, sizeof label, "%.3g", yv);
    text(s, f.x0 - 4, f.py(yv) + 4, label, "end");
  }
  text(s, f.x0 + f.w / 2, f.y0 + f.h + 30, xlabel);
  append(s, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" transform=\"rotate(-90 %.1f %.1f)\">%s</text>\n",
         f.x0 - 40, f.y0 + f.h / 2, f.x0 - 40, f.y0 + f.h / 2, ylabel.c_str());
}

}  // namespace svg

struct HeatmapOptions {
  int psi_bins = 201;
  int max_columns = 300;
};

// |P(Psi, m)| / sqrt(N) as grayscale; Psi runs from +1 (top) to -1, the
// subcarrier index from left to right. Wide bands are subsampled.
inline std::string render_heatmap(const ArrayConfig& phi, const SystemConfig& cfg, HeatmapOptions opt = {}) {
  cfg.validate();
  check_config(phi, cfg);
  detail::require(opt.psi_bins >= 2 && opt.max_columns >= 1, Errc::invalid_argument, "heatmap needs at least 2x1 bins");
  const int cols = std::min(cfg.n_subcarriers, opt.max_columns);
  const int rows = opt.psi_bins;
  const double cell_w = 2.0;
  const double cell_h = 2.0;
  const svg::Frame f{70, 20, cols * cell_w, rows * cell_h, 1, static_cast<double>(cfg.n_subcarriers), -1, 1};
  std::string s = svg::open(static_cast<int>(f.x0 + f.w + 20), static_cast<int>(f.y0 + f.h + 50));
  svg::append(s, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"black\"/>\n", f.x0, f.y0, f.w, f.h);
  const double norm = std::sqrt(static_cast<double>(cfg.n_antennas));
  // Sample column-major, then emit row by row, merging equal-shade runs.
  std::vector<int> level(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int c = 0; c < cols; ++c) {
    const int k = cols == 1 ? 0 : static_cast<int>(std::lround(static_cast<double>(c) * (cfg.n_subcarriers - 1) / (cols - 1)));
    for (int r = 0; r < rows; ++r) {
      const double psi = 1.0 - 2.0 * r / (rows - 1);
      const double mag = std::min(1.0, std::abs(detail::steered_gain(phi, psi, k, cfg)) / norm);
      level[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)] =
          static_cast<int>(std::lround(63.0 * mag)) * 255 / 63;
    }
  }
  s += "<g shape-rendering=\"crispEdges\">\n";
  for (int r = 0; r < rows; ++r) {
    const int* row = level.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols);
    for (int c = 0; c < cols;) {
      int end = c + 1;
      while (end < cols && row[end] == row[c]) ++end;
      if (row[c] > 0)
        svg::append(s, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"#%02x%02x%02x\"/>\n",
                    f.x0 + c * cell_w, f.y0 + r * cell_h, (end - c) * cell_w, cell_h, row[c], row[c], row[c]);
      c = end;
    }
  }
  s += "</g>\n";
  svg::axes(s, f, "subcarrier m", "direction sin(theta)", 4);
  s += "</svg>\n";
  return s;
}

// ASE bars per subband (with the upper bound as a dashed line) next to the
// ECDF of the spectral efficiency.
inline std::string render_summary(const nlohmann::json& summary) {
  std::vector<double> ase;
  std::vector<std::pair<double, double>> curve;
  double bound = 0.0;
  try {
    ase = summary.at("ase_per_subband").get<std::vector<double>>();
    bound = summary.at("upper_bound").get<double>();
    for (const auto& p : summary.at("ecdf")) curve.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("invalid summary JSON: ") + e.what());
  }
  detail::require(!ase.empty() && !curve.empty() && std::isfinite(bound) && bound > 0.0, Errc::parse,
                  "summary has no ASE or ECDF data");

  const double top = std::ceil(bound + 0.5);
  std::string s = svg::open(860, 340);

  const svg::Frame bars{60, 20, 340, 260, 0, static_cast<double>(ase.size()), 0, top};
  const double slot = bars.w / static_cast<double>(ase.size());
  char label[32];
  for (std::size_t g = 0; g < ase.size(); ++g) {
    const double y = bars.py(std::clamp(ase[g], 0.0, top));
    svg::append(s, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#4a78b0\"/>\n",
                bars.x0 + slot * (g + 0.15), y, slot * 0.7, bars.y0 + bars.h - y);
    std::snprintf(label, sizeof label, "%.3f", ase[g]);
    svg::text(s, bars.x0 + slot * (g + 0.5), y - 4, label);
  }
  svg::append(s, "<line x1=\"%.1f\" y1=\"%.2f\" x2=\"%.1f\" y2=\"%.2f\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n",
              bars.x0, bars.py(bound), bars.x0 + bars.w, bars.py(bound));
  svg::axes(s, bars, "subband", "ASE (bps/Hz)", static_cast<int>(ase.size()));

  const svg::Frame cdf{480, 20, 340, 260, 0, top, 0, 1};
  s += "<polyline fill=\"none\" stroke=\"#4a78b0\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double x = cdf.px(std::clamp(curve[i].first, 0.0, top));
    svg::append(s, "%s%.2f,%.2f", i ? " " : "", x, cdf.py(std::clamp(curve[i].second, 0.0, 1.0)));
  }
  s += "\"/>\n";
  svg::append(s, "<line x1=\"%.2f\" y1=\"%.1f\" x2=\"%.2f\" y2=\"%.1f\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n",
              cdf.px(bound), cdf.y0, cdf.px(bound), cdf.y0 + cdf.h);
  svg::axes(s, cdf, "spectral efficiency (bps/Hz)", "CDF", 5);
  s += "</svg>\n";
  return s;
}

}  // namespace ttdbeam
