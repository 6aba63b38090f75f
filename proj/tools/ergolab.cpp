// ergolab command-line front end: parse a TOML run config and/or flags,
// execute, and emit JSON/CSV reports. Flags override file keys one for one.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ergolab/cli/run.hpp"

namespace {

using ergolab::cli::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "TOML config file (parsed before flags)");
  cmd->add_option("--system", cfg.system_spec,
                  "system spec: rotation:golden | rotation:a1,a2 | skew:golden | cat | "
                  "toral:a,b,c,d | subshift:thue_morse | product:specA|specB");
  cmd->add_option("--f", cfg.f,
                  "observable slot, repeatable; torus: 'k:re[,im];...' with comma-separated "
                  "multi-dim frequencies; subshift: 'word=re[,im];...'");
  cmd->add_option("--face", cfg.faces, "face observable 'eps=entries', eps a d-bit 0/1 string");
  cmd->add_option("--g", cfg.g, "second observable (slice integral)");
  cmd->add_option("--d", cfg.d, "cube/box dimension");
  cmd->add_option("--schedule", cfg.schedule, "N schedule: lo..hi (powers of two) or list");
  cmd->add_option("--strides", cfg.strides, "action strides, e.g. 1,2");
  cmd->add_option("--x", cfg.x, "base point (torus: turns per coordinate; subshift: offset)");
  cmd->add_option("--probe-x", cfg.probe_x, "explicit probe point, repeatable");
  cmd->add_option("--probe-points", cfg.probe_points, "total probe points (random fill)");
  cmd->add_option("--seed", cfg.seed, "rng seed for random points");
  cmd->add_option("--N", cfg.N, "single N");
  cmd->add_option("--H", cfg.H, "shift count H");
  cmd->add_option("--N-big", cfg.N_big, "long-run oracle N");
  cmd->add_option("--nmax", cfg.nmax, "tempered check n_max");
  cmd->add_option("--k", cfg.k, "seminorm order");
  cmd->add_option("--method", cfg.method, "seminorm method: exact | empirical");
  cmd->add_option("--slice-map", cfg.slice_map, "slice variant: shift | double");
  cmd->add_option("--s", cfg.s, "slice parameter s");
  cmd->add_option("--sequence", cfg.sequence,
                  "vdc sequence: orbit | constant | rotation-char | quadratic-char");
  cmd->add_option("--avg-kind", cfg.avg_kind, "underlying average for limit kinds");
  cmd->add_option("--L", cfg.L, "pattern window length");
  cmd->add_option("--threshold", cfg.threshold, "probe spread threshold");
  cmd->add_option("--tolerance", cfg.tolerance, "numeric tolerance");
  cmd->add_option("--tail-window", cfg.tail_window, "trailing window for tail_spread");
  cmd->add_option("--grid-cap", cfg.grid_cap, "grid size cap");
  cmd->add_option("--term-cap", cfg.term_cap, "symbolic term cap");
  cmd->add_option("--op-cap", cfg.op_cap, "empirical seminorm op cap");
  cmd->add_option("--horizon-cap", cfg.horizon_cap, "substitution horizon cap");
  cmd->add_option("--threads", cfg.threads, "worker threads (never changes results)");
  cmd->add_option("--out-dir", cfg.out_dir, "output directory (default $ERGOLAB_OUT_DIR or .)");
  cmd->add_option("--report", cfg.report_path, "report JSON path");
  cmd->add_option("--csv", cfg.csv_path, "trace CSV path");
  cmd->add_flag("--emit-timing", cfg.emit_timing, "include elapsed time in the report");
}

int run_command(const std::string& command, CLI::App* cmd, RunConfig cfg,
                const std::string& config_path) {
  cfg.command = command;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config error: cannot open '" << config_path << "'\n";
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig from_file;
    from_file.command = command;
    try {
      ergolab::cli::apply_toml(from_file, ergolab::cli::parse_toml(ss.str()));
    } catch (const ergolab::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
    // flags passed on the command line override file keys one for one
    RunConfig merged = from_file;
    auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--system")) merged.system_spec = cfg.system_spec;
    if (passed("--f")) merged.f = cfg.f;
    if (passed("--face")) merged.faces = cfg.faces;
    if (passed("--g")) merged.g = cfg.g;
    if (passed("--d")) merged.d = cfg.d;
    if (passed("--schedule")) merged.schedule = cfg.schedule;
    if (passed("--strides")) merged.strides = cfg.strides;
    if (passed("--x")) merged.x = cfg.x;
    if (passed("--probe-x")) merged.probe_x = cfg.probe_x;
    if (passed("--probe-points")) merged.probe_points = cfg.probe_points;
    if (passed("--seed")) merged.seed = cfg.seed;
    if (passed("--N")) merged.N = cfg.N;
    if (passed("--H")) merged.H = cfg.H;
    if (passed("--N-big")) merged.N_big = cfg.N_big;
    if (passed("--nmax")) merged.nmax = cfg.nmax;
    if (passed("--k")) merged.k = cfg.k;
    if (passed("--method")) merged.method = cfg.method;
    if (passed("--slice-map")) merged.slice_map = cfg.slice_map;
    if (passed("--s")) merged.s = cfg.s;
    if (passed("--sequence")) merged.sequence = cfg.sequence;
    if (passed("--avg-kind")) merged.avg_kind = cfg.avg_kind;
    if (passed("--L")) merged.L = cfg.L;
    if (passed("--threshold")) merged.threshold = cfg.threshold;
    if (passed("--tolerance")) merged.tolerance = cfg.tolerance;
    if (passed("--tail-window")) merged.tail_window = cfg.tail_window;
    if (passed("--grid-cap")) merged.grid_cap = cfg.grid_cap;
    if (passed("--term-cap")) merged.term_cap = cfg.term_cap;
    if (passed("--op-cap")) merged.op_cap = cfg.op_cap;
    if (passed("--horizon-cap")) merged.horizon_cap = cfg.horizon_cap;
    if (passed("--threads")) merged.threads = cfg.threads;
    if (passed("--out-dir")) merged.out_dir = cfg.out_dir;
    if (passed("--report")) merged.report_path = cfg.report_path;
    if (passed("--csv")) merged.csv_path = cfg.csv_path;
    if (passed("--emit-timing")) merged.emit_timing = cfg.emit_timing;
    if (passed("--kind")) merged.kind = cfg.kind;
    cfg = merged;
    cfg.command = command;
  }
  return ergolab::cli::run(std::move(cfg));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: cube averages, Host-Kra seminorms and limit formulas on explicit "
               "strictly ergodic systems"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string kind;

  struct Sub {
    CLI::App* cmd;
    std::string name;
  };
  std::vector<Sub> subs;
  for (const char* name : {"average", "limit", "seminorm", "probe", "cube-language", "vdc",
                           "tempered"}) {
    CLI::App* cmd = app.add_subcommand(name, "");
    cmd->add_option("--kind", kind, "sub-kind of the command");
    add_common_options(cmd, cfg, config_path);
    subs.push_back({cmd, name});
  }
  CLI::App* cmp = app.add_subcommand("compare", "diff two reports of the same kind");
  cmp->add_option("a", cfg.compare_a, "first report")->required();
  cmp->add_option("b", cfg.compare_b, "second report")->required();
  cmp->add_option("--fail-above", cfg.fail_above, "exit 3 when max |diff| exceeds this");
  cmp->add_option("--report", cfg.report_path, "write the diff summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cmp->parsed()) {
    cfg.command = "compare";
    return ergolab::cli::run(std::move(cfg));
  }
  for (const auto& sub : subs) {
    if (sub.cmd->parsed()) {
      cfg.kind = kind;
      return run_command(sub.name, sub.cmd, cfg, config_path);
    }
  }
  std::cerr << "config error: no subcommand\n";
  return 2;
}
