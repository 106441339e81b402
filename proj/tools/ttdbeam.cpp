// ttdbeam command-line tool: dictionary compilation, split-beam synthesis,
// Monte-Carlo evaluation, benchmarking and SVG rendering.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ttdbeam/ttdbeam.hpp"

namespace {

using namespace ttdbeam;

enum Exit : int { kOk = 0, kUsage = 2, kIo = 3, kIncompatible = 4, kParse = 5 };

int exit_code(Errc e) {
  switch (e) {
    case Errc::io: return kIo;
    case Errc::incompatible: return kIncompatible;
    case Errc::parse:
    case Errc::corrupt_file: return kParse;
    case Errc::invalid_argument:
    case Errc::dimension_mismatch: break;
  }
  return kUsage;
}

struct SystemFlags {
  int n = 16;
  int m = 1200;
  double fc = 28e9;
  double bw = 3e9;

  std::vector<CLI::Option*> options;

  void add(CLI::App* app) {
    options = {app->add_option("--n", n, "antennas")->capture_default_str(),
               app->add_option("--m", m, "subcarriers")->capture_default_str(),
               app->add_option("--fc", fc, "carrier frequency, Hz")->capture_default_str(),
               app->add_option("--bw", bw, "bandwidth, Hz")->capture_default_str()};
  }
  bool given() const {
    return std::ranges::any_of(options, [](const CLI::Option* o) { return o->count() > 0; });
  }
  SystemConfig get() const {
    SystemConfig cfg{n, m, fc, bw};
    cfg.validate();
    return cfg;
  }
};

struct SolverFlags {
  int iters = 30;
  std::optional<double> tmax;
  int delay_grid = 4096;

  void add(CLI::App* app) {
    app->add_option("--iters", iters, "alternating-minimization sweeps")->capture_default_str();
    app->add_option("--tmax-s", tmax, "maximum delay, s (default M/BW)");
    app->add_option("--delay-grid", delay_grid, "coarse delay grid size")->capture_default_str();
  }
  SolverParams get(const SystemConfig& cfg) const {
    auto p = SolverParams::for_system(cfg, iters, delay_grid);
    if (tmax) p.max_delay_s = *tmax;
    p.validate();
    return p;
  }
};

DirectionMap parse_dirs(const std::string& text) {
  try {
    return DirectionMap{parse_direction_list(text)};
  } catch (const Error& e) {
    throw Error(Errc::invalid_argument, std::string("--dirs: ") + e.what());
  }
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- dict-build ------------------------------------------------------------

struct DictBuildCmd {
  SystemFlags sys;
  SolverFlags solver;
  int grid = 499;
  std::string out;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("dict-build", "compile the two-subband generator dictionary");
    sys.add(c);
    solver.add(c);
    c->add_option("--grid", grid, "direction grid size A")->capture_default_str();
    c->add_option("--out", out, "output dictionary file")->required();
    c->callback([this] { run(); });
  }

  void run() const {
    const auto cfg = sys.get();
    const auto params = solver.get(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const auto build = build_dictionary(cfg, grid, params);
    const double elapsed = seconds_since(t0);
    save(build.dictionary, out);
    auto side = sidecar_json(build.dictionary);
    side["build_seconds"] = elapsed;
    side["degenerate_offsets"] = build.degenerate_offsets;
    side["low_fidelity_offsets"] = build.low_fidelity_offsets;
    write_text(out + ".json", side.dump(2) + "\n");
    std::cout << "entries " << build.dictionary.size() << "\n"
              << "bytes " << side["file_bytes"].get<std::size_t>() << "\n"
              << "build_seconds " << fmt("%.2f", elapsed) << "\n"
              << "degenerate " << build.degenerate_offsets.size() << "\n"
              << "low_fidelity " << build.low_fidelity_offsets.size() << "\n";
  }
};

// --- synth -----------------------------------------------------------------

struct SynthCmd {
  std::string dict_path;
  std::string dirs;
  std::string out;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("synth", "synthesize a split-beam array configuration");
    c->add_option("--dict", dict_path, "dictionary file")->required();
    c->add_option("--dirs", dirs, "comma-separated sine-space directions, one per subband")->required();
    c->add_option("--out", out, "output config JSON (default stdout)");
    c->callback([this] { run(); });
  }

  void run() const {
    const auto map = parse_dirs(dirs);
    const auto dict = load(dict_path);
    const auto& cfg = dict.meta;
    map.validate_for(cfg);
    const auto phi = synthesize(map, dict, cfg);
    const auto text = config_to_json(phi, cfg).dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      write_text(out, text);
    }
    // Predicted gains: mean and minimum |P|^2 / N towards each subband's direction.
    const int g_count = map.subbands();
    const int width = cfg.n_subcarriers / g_count;
    for (int g = 0; g < g_count; ++g) {
      double sum = 0.0;
      double worst = INFINITY;
      for (int k = g * width; k < (g + 1) * width; ++k) {
        const double p = std::norm(gain_at(phi, map.directions[static_cast<std::size_t>(g)], k, cfg)) / cfg.n_antennas;
        sum += p;
        worst = std::min(worst, p);
      }
      std::cerr << "subband " << g + 1 << " direction " << map.directions[static_cast<std::size_t>(g)]
                << " mean_gain_db " << fmt("%.2f", 10 * std::log10(sum / width)) << " min_gain_db "
                << fmt("%.2f", 10 * std::log10(worst)) << "\n";
    }
  }
};

// --- eval ------------------------------------------------------------------

struct EvalCmd {
  std::string dict_path;
  SystemFlags sys;
  SolverFlags solver;
  int ues = 3;
  int trials = 200;
  std::uint64_t seed = 42;
  double snr_db = 10.0;
  std::optional<int> grid;
  std::string synth = "hdb";
  std::string prefix;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("eval", "Monte-Carlo spectral-efficiency evaluation");
    c->add_option("--dict", dict_path, "dictionary file (required for hdb; fixes N, M, f_c, BW)");
    sys.add(c);
    solver.add(c);
    c->add_option("--ues", ues, "users = subbands G")->capture_default_str();
    c->add_option("--trials", trials, "Monte-Carlo trials")->capture_default_str();
    c->add_option("--seed", seed, "master seed")->capture_default_str();
    c->add_option("--snr-db", snr_db, "SNR, dB")->capture_default_str();
    c->add_option("--grid", grid, "direction grid size A (default: dictionary's, else 499)");
    c->add_option("--synth", synth, "synthesizer")->check(CLI::IsMember({"hdb", "jpta"}))->capture_default_str();
    c->add_option("--out-prefix", prefix, "writes <prefix>.csv and <prefix>.summary.json")->required();
    c->callback([this] { run(); });
  }

  void run() const {
    detail::require(synth != "hdb" || !dict_path.empty(), Errc::invalid_argument, "--synth hdb needs --dict");
    std::optional<GeneratorDictionary> dict;
    if (!dict_path.empty()) dict = load(dict_path);
    // Explicit system flags must agree with the dictionary.
    if (dict && sys.given()) check_compatible(*dict, sys.get());
    EvalScenario sc;
    sc.cfg = dict ? dict->meta : sys.get();
    sc.subbands = ues;
    sc.snr_linear = snr_from_db(snr_db);
    sc.direction_grid_size = grid ? *grid : (dict ? dict->direction_grid_size : 499);
    sc.n_trials = trials;
    sc.master_seed = seed;
    sc.validate();

    SynthesizerRegistry registry;
    if (dict) registry.add("hdb", make_hdb_synthesizer(*dict));
    registry.add("jpta", make_jpta_synthesizer(sc.cfg, solver.get(sc.cfg)));

    const auto rep = monte_carlo(sc, registry.get(synth), synth);
    std::ofstream csv(prefix + ".csv", std::ios::binary | std::ios::trunc);
    detail::require(static_cast<bool>(csv), Errc::io, "cannot open '" + prefix + ".csv' for writing");
    write_csv(rep, csv);
    csv.close();
    detail::require(!csv.fail(), Errc::io, "failed writing '" + prefix + ".csv'");
    const auto summary = summary_json(rep);
    write_text(prefix + ".summary.json", summary.dump(2) + "\n");

    std::cout << "upper_bound " << fmt("%.4f", rep.upper_bound) << "\n";
    const auto& ratios = summary["ase_ratio_per_subband"];
    for (std::size_t g = 0; g < ratios.size(); ++g)
      std::cout << "subband " << g + 1 << " ase " << fmt("%.4f", summary["ase_per_subband"][g].get<double>())
                << " ratio " << fmt("%.4f", ratios[g].get<double>()) << "\n";
    std::cout << "subcarrier_spread " << fmt("%.4f", summary["subcarrier_spread"].get<double>()) << "\n"
              << "fraction_below_6 " << fmt("%.4f", summary["fraction_below_6"].get<double>()) << "\n"
              << "failed_trials " << rep.failed_count() << "\n";
  }
};

// --- bench -----------------------------------------------------------------

struct BenchCmd {
  std::string dict_path;
  SolverFlags solver;
  int ues = 3;
  int calls = 1000;
  int baseline_calls = 10;
  std::uint64_t seed = 42;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("bench", "mean synthesis wall time, HDB vs direct JPTA");
    c->add_option("--dict", dict_path, "dictionary file")->required();
    solver.add(c);
    c->add_option("--ues", ues, "subbands G")->capture_default_str();
    c->add_option("--calls", calls, "timed HDB calls")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--baseline-calls", baseline_calls, "timed JPTA calls (0 skips)")->capture_default_str()->check(CLI::NonNegativeNumber);
    c->add_option("--seed", seed, "seed for the benchmark directions")->capture_default_str();
    c->callback([this] { run(); });
  }

  void run() const {
    const auto dict = load(dict_path);
    EvalScenario sc;
    sc.cfg = dict.meta;
    sc.subbands = ues;
    sc.direction_grid_size = dict.direction_grid_size;
    sc.master_seed = seed;
    sc.validate();
    std::vector<DirectionMap> maps;
    for (int t = 0; t < 64; ++t) maps.push_back(draw_directions(sc, t));

    const auto hdb = runtime_bench("hdb", make_hdb_synthesizer(dict), maps, calls, 10);
    std::cout << "hdb calls " << hdb.calls << " mean_s " << fmt("%.3e", hdb.mean_seconds) << "\n";
    if (baseline_calls > 0) {
      const auto jpta = runtime_bench("jpta", make_jpta_synthesizer(sc.cfg, solver.get(sc.cfg)), maps, baseline_calls, 1);
      std::cout << "jpta calls " << jpta.calls << " mean_s " << fmt("%.3e", jpta.mean_seconds) << "\n"
                << "speedup " << fmt("%.1f", jpta.mean_seconds / hdb.mean_seconds) << "\n";
    }
  }
};

// --- render ----------------------------------------------------------------

struct RenderCmd {
  std::string config;
  std::string summary;
  std::string out;

  void add(CLI::App& root) {
    auto* c = root.add_subcommand("render", "write an SVG plot of a config or an eval summary");
    auto* cfg_opt = c->add_option("--config", config, "array config JSON -> beampattern heatmap");
    auto* sum_opt = c->add_option("--summary", summary, "eval summary JSON -> ASE bars and ECDF");
    cfg_opt->excludes(sum_opt);
    c->add_option("--out", out, "output SVG file")->required();
    c->callback([this] { run(); });
  }

  void run() const {
    detail::require(!config.empty() || !summary.empty(), Errc::invalid_argument, "need --config or --summary");
    std::string svg;
    if (!config.empty()) {
      const auto [phi, cfg] = config_from_json(parse_json(read_text(config)));
      svg = render_heatmap(phi, cfg);
    } else {
      svg = render_summary(parse_json(read_text(summary)));
    }
    write_text(out, svg);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TTD array split-beampattern synthesis"};
  app.require_subcommand(1);
  DictBuildCmd dict_build;
  SynthCmd synth;
  EvalCmd eval;
  BenchCmd bench;
  RenderCmd render;
  dict_build.add(app);
  synth.add(app);
  eval.add(app);
  bench.add(app);
  render.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
