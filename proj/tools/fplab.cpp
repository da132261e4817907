// fplab: exact-arithmetic laboratory for fictitious play in zero-sum games.
//
// Subcommands: analyze, simulate, batch, verify, construct, envelope.
// All equilibrium computation is exact rational arithmetic; trajectories are
// bit-reproducible given the same seed and tool version.

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "fplab/verify.hpp"

namespace {

using namespace fplab;

constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitDeskScale = 3;

int max_dim_from_env() {
  if (const char* env = std::getenv("FPLAB_MAX_DIM")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return kDefaultMaxDimSum;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) out.push_back(parse_rational(token));
  return out;
}

MixedStrategy strategy_from_arg(const std::string& text) {
  auto vals = parse_rational_list(text);
  VecR v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return MixedStrategy(std::move(v));
}

std::string sanitize_filename(std::string s) {
  for (char& c : s)
    if (c == ':' || c == '/' || c == ',' || c == ' ') c = '-';
  return s;
}

struct SimulateArgs {
  std::string game;
  long long steps = 10000;
  std::string k1 = "0", k2 = "0";
  std::string x0, y0;
  std::string tb1 = "uniform", tb2 = "uniform";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "auto";
  long long decimate = 1;
};

FPConfig build_fp_config(const SimulateArgs& args, const LoadedGame& game) {
  FPConfig cfg(game.matrix);
  cfg.steps = args.steps;
  cfg.k1 = parse_rational(args.k1);
  cfg.k2 = parse_rational(args.k2);
  if (!args.x0.empty()) cfg.x0 = strategy_from_arg(args.x0);
  if (!args.y0.empty()) cfg.y0 = strategy_from_arg(args.y0);
  cfg.tiebreak_p1 = TieBreakSpec::parse(args.tb1);
  cfg.tiebreak_p2 = TieBreakSpec::parse(args.tb2);
  cfg.seed = args.seed;
  cfg.record.decimate = args.decimate;
  return cfg;
}

int cmd_analyze(const std::string& game_arg, const std::string& out_path) {
  LoadedGame game = load_game(game_arg);
  check_desk_scale(game.matrix, max_dim_from_env());
  GameAnalysis ga = analyze_game(game.matrix, max_dim_from_env());
  std::optional<StructureReport> structure;
  if (ga.normalization) {
    const PayoffMatrix& nm = ga.normalization->matrix;
    structure = check_structure(nm, analyze_game(nm, max_dim_from_env()));
  }
  Json report = analysis_to_json(ga, structure ? &*structure : nullptr);
  report["game"] = game.name;
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    Json cfg{{"game", game_arg}, {"out", out_path}};
    write_output_with_manifest(out_path, text, make_manifest("analyze", cfg));
  }
  return 0;
}

int cmd_simulate(const SimulateArgs& args) {
  LoadedGame game = load_game(args.game);
  FPConfig cfg = build_fp_config(args, game);
  Trajectory traj = fp_run(cfg);

  std::string format = args.format;
  if (format == "auto")
    format = args.out.ends_with(".json") ? "json" : "csv";
  std::string content = format == "json"
                            ? trajectory_to_json(traj).dump(2) + "\n"
                            : trajectory_to_csv(traj);
  Json manifest =
      make_manifest("simulate", fp_config_to_json(cfg, game.name));
  if (args.out.empty()) {
    std::cout << content;
  } else {
    write_output_with_manifest(args.out, content, manifest);
    const auto& fin = traj.final_record();
    std::cout << "wrote " << args.out << " (" << traj.records.size()
              << " records";
    if (fin.x_hat) {
      std::cout << ", x(T)=(";
      for (Eigen::Index i = 0; i < fin.x_hat->size(); ++i)
        std::cout << (i ? "," : "") << to_string((*fin.x_hat)[i]);
      std::cout << ")";
    }
    std::cout << ")\n";
  }
  return 0;
}

int cmd_batch(const std::string& spec_path, const std::string& outdir,
              std::uint64_t master_seed) {
  std::ifstream in(spec_path);
  if (!in) throw ParseError("cannot open batch spec: " + spec_path);
  Json spec;
  try {
    in >> spec;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad JSON in batch spec: ") + e.what());
  }
  std::filesystem::create_directories(outdir);

  std::vector<std::string> games = spec.value("games", std::vector<std::string>{});
  std::vector<std::string> rules = spec.value("rules", std::vector<std::string>{});
  std::vector<std::uint64_t> seeds =
      spec.value("seeds", std::vector<std::uint64_t>{});
  long long steps = spec.value("steps", 10000ll);
  std::string k1 = spec.value("k1", "0");
  std::string k2 = spec.value("k2", "0");
  long long decimate = spec.value("decimate", 100ll);

  struct Cell {
    std::string game, rule;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& g : games)
    for (const auto& r : rules)
      for (std::uint64_t s : seeds) cells.push_back({g, r, s});

  // Worker pool over cells; each cell owns its run and writes its trajectory
  // atomically. Summary rows are joined in cell order, so the output is
  // byte-identical regardless of scheduling.
  std::vector<std::string> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      std::string cell_id =
          cell.game + "|" + cell.rule + "|s" + std::to_string(cell.seed);
      std::ostringstream row;
      row << cell.game << "," << cell.rule << "," << cell.seed << "," << steps
          << ",";
      try {
        LoadedGame game = load_game(cell.game);
        SimulateArgs args;
        args.steps = steps;
        args.k1 = k1;
        args.k2 = k2;
        args.tb1 = cell.rule;
        args.tb2 = cell.rule;
        args.seed = master_seed ^ fnv1a(cell_id);
        args.decimate = decimate;
        FPConfig cfg = build_fp_config(args, game);
        // 2-action-only rules fall back to uniform on the other player.
        TieBreakSpec rule = TieBreakSpec::parse(cell.rule);
        cfg.tiebreak_p1 =
            verify_detail::uniform_fallback(rule, game.matrix.rows());
        cfg.tiebreak_p2 =
            verify_detail::uniform_fallback(rule, game.matrix.cols());
        Trajectory traj = fp_run(cfg);
        GameAnalysis ga = analyze_game(game.matrix, max_dim_from_env());
        ConvergenceReport rep = oscillation_verdict(traj, 0.5, 0.1, &ga);
        const auto& fin = traj.final_record();
        double final_dist = fin.x_hat && fin.y_hat
                                ? dist_to_ne(*fin.x_hat, *fin.y_hat, ga)
                                : -1;
        double min_dist = final_dist;
        for (const auto& [k, d] : rep.dist_to_ne_series)
          min_dist = std::min(min_dist, d);
        VisitCounts vc = visit_counts(traj);

        std::string fname = sanitize_filename(cell.game) + "__" +
                            sanitize_filename(cell.rule) + "__s" +
                            std::to_string(cell.seed) + ".csv";
        Json manifest =
            make_manifest("batch-cell", fp_config_to_json(cfg, game.name));
        write_output_with_manifest(std::filesystem::path(outdir) / fname,
                                   trajectory_to_csv(traj), manifest);

        row << "ok," << rep.verdict_name() << "," << rep.tail_diameter_x
            << "," << min_dist << "," << final_dist << "," << vc.min_x1_yi()
            << ",\n";
      } catch (const std::exception& e) {
        row << "error,,,,,," << e.what() << "\n";
      }
      rows[i] = row.str();
    }
  };
  unsigned n_workers = std::max(1u, std::min<unsigned>(
                                        std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t + 1 < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream summary;
  summary << "# schema=" << kSchemaVersion << "-batch tool=" << kToolVersion
          << "\n";
  summary << "game,rule,seed,steps,status,verdict,tail_diameter,min_dist,"
             "final_dist,min_visit,error\n";
  for (const auto& row : rows) summary << row;
  Json cfg_echo{{"spec", spec_path}, {"outdir", outdir}, {"seed", master_seed}};
  write_output_with_manifest(std::filesystem::path(outdir) / "summary.csv",
                             summary.str(),
                             make_manifest("batch", cfg_echo));
  std::cout << "batch summary written to " << outdir << "/summary.csv\n";
  return 0;
}

int cmd_verify(const std::string& only, bool long_mode,
               const std::string& json_out) {
  std::vector<CheckResult> results = run_verify(only, long_mode);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) std::cout << " — " << r.detail;
    std::cout << "\n";
    if (!r.pass) ++failed;
  }
  std::cout << results.size() << " checks, " << failed << " failed\n";
  if (!json_out.empty()) {
    Json arr = Json::array();
    for (const auto& r : results)
      arr.push_back(
          Json{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    Json report{{"schema", std::string(kSchemaVersion) + "-verify"},
                {"tool", kToolVersion},
                {"checks", std::move(arr)},
                {"failed", failed}};
    write_text_atomic(json_out, report.dump(2) + "\n");
  }
  return failed == 0 ? 0 : kExitFailure;
}

int cmd_construct(const std::string& base, const std::string& vprime,
                  const std::string& out_path) {
  LoadedGame game = load_game(base);
  Rational v = parse_rational(vprime);
  ConstructReport rep = append_constant_column(game.matrix, v);
  Json report{{"schema", kSchemaVersion},
              {"base", game.name},
              {"vprime", to_string(v)},
              {"base_value", to_string(rep.base_value)},
              {"new_value", to_string(rep.new_value)},
              {"value_equals_vprime", rep.value_equals_vprime},
              {"a1_after", rep.a1_after},
              {"appended_dominated", rep.appended_dominated},
              {"matrix", matrix_to_json(rep.matrix)}};
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    Json cfg{{"base", base}, {"vprime", vprime}, {"out", out_path}};
    write_output_with_manifest(out_path, text, make_manifest("construct", cfg));
    std::cout << "wrote " << out_path << " (new value " << to_string(rep.new_value)
              << ", A1 " << (rep.a1_after ? "holds" : "fails") << ")\n";
  }
  return 0;
}

int cmd_envelope(const std::string& game_arg, int grid,
                 const std::string& out_path) {
  LoadedGame game = load_game(game_arg);
  EnvelopeResult env = lower_envelope(game.matrix, grid);
  std::ostringstream os;
  os << "# schema=" << kSchemaVersion << "-envelope tool=" << kToolVersion
     << " value=" << to_string(env.value) << " argmax=["
     << to_string(env.argmax_lo) << "," << to_string(env.argmax_hi) << "]\n";
  os << "p";
  for (int i = 1; i <= game.matrix.cols(); ++i) os << ",line_" << i;
  os << ",envelope\n";
  os.precision(17);
  for (std::size_t g = 0; g < env.grid.size(); ++g) {
    os << env.grid[g];
    for (const auto& line : env.lines) os << "," << line[g];
    os << "," << env.envelope[g] << "\n";
  }
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    Json cfg{{"game", game_arg}, {"grid", grid}, {"out", out_path}};
    write_output_with_manifest(out_path, os.str(),
                               make_manifest("envelope", cfg));
    std::cout << "wrote " << out_path << " (value " << to_string(env.value)
              << ", argmax [" << to_string(env.argmax_lo) << ","
              << to_string(env.argmax_hi) << "])\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fplab — exact fictitious-play laboratory for zero-sum games"};
  app.require_subcommand(1);

  std::string game, out;
  auto* analyze = app.add_subcommand("analyze",
                                     "exact value, equilibrium sets and "
                                     "assumption checks for a game");
  analyze->add_option("--game", game, "library name or matrix JSON file")
      ->required();
  analyze->add_option("--out", out, "write the JSON report here");

  SimulateArgs sim;
  auto* simulate =
      app.add_subcommand("simulate", "run fictitious play and export the "
                                     "trajectory");
  simulate->add_option("--game", sim.game, "library name or matrix file")
      ->required();
  simulate->add_option("--steps", sim.steps, "number of FP steps");
  simulate->add_option("--k1", sim.k1, "Player 1 prior weight (rational)");
  simulate->add_option("--k2", sim.k2, "Player 2 prior weight (rational)");
  simulate->add_option("--x0", sim.x0, "Player 1 prior, e.g. 3/4,1/8,1/8");
  simulate->add_option("--y0", sim.y0, "Player 2 prior");
  simulate->add_option("--tiebreak-p1", sim.tb1,
                       "lowest|highest|uniform|parity|onebit:a,b");
  simulate->add_option("--tiebreak-p2", sim.tb2, "tie-break rule for P2");
  simulate->add_option("--seed", sim.seed, "PRNG seed");
  simulate->add_option("--out", sim.out, "output file (.csv or .json)");
  simulate->add_option("--format", sim.format, "csv|json|auto");
  simulate->add_option("--decimate", sim.decimate,
                       "store every s-th step (0 = changes/endpoints only)");

  std::string spec_path, outdir;
  std::uint64_t batch_seed = 0;
  auto* batch = app.add_subcommand(
      "batch", "run a games x rules x seeds sweep from a JSON spec");
  batch->add_option("--spec", spec_path, "batch spec JSON")->required();
  batch->add_option("--outdir", outdir, "output directory")->required();
  batch->add_option("--seed", batch_seed, "master seed (xor-ed with cell ids)");

  std::string only, verify_json;
  bool long_mode = false;
  auto* verify = app.add_subcommand(
      "verify", "run the built-in verification suites (nonzero exit on any "
                "failure)");
  verify->add_option("--only", only, "filter suites by substring");
  verify->add_flag("--long", long_mode, "include 1e6-step reproductions");
  verify->add_option("--json", verify_json, "write results as JSON");

  std::string base, vprime;
  auto* construct = app.add_subcommand(
      "construct", "append a constant column v'*1_n to a game");
  construct->add_option("--base", base, "base game")->required();
  construct->add_option("--vprime", vprime, "constant value (rational)")
      ->required();
  construct->add_option("--out", out, "write the matrix JSON here");

  int grid = 101;
  auto* envelope = app.add_subcommand(
      "envelope", "lower payoff envelope of a 2-row game (plot-ready CSV)");
  envelope->add_option("--game", game, "library name or matrix file")
      ->required();
  envelope->add_option("--grid", grid, "number of sample points");
  envelope->add_option("--out", out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(game, out);
    if (simulate->parsed()) return cmd_simulate(sim);
    if (batch->parsed()) return cmd_batch(spec_path, outdir, batch_seed);
    if (verify->parsed()) return cmd_verify(only, long_mode, verify_json);
    if (construct->parsed()) return cmd_construct(base, vprime, out);
    if (envelope->parsed()) return cmd_envelope(game, grid, out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DeskScaleError& e) {
    std::cerr << "desk-scale cap: " << e.what() << "\n";
    return kExitDeskScale;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
