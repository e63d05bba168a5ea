#include "sttd/commands.hpp"
#include "sttd/error.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <map>

namespace {

using sttd::RunConfig;

// Per-parameter flags shared by every subcommand. Values are kept as text
// and applied after the config file so flags always win.
struct Overrides {
  std::string config_file;
  std::map<std::string, std::string> values;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key=value configuration file");
    for (const std::string& key : sttd::config_keys()) {
      if (key == "input" || key == "output") continue;
      app.add_option("--" + key, values[key], "override '" + key + "'");
    }
  }

  RunConfig resolve(const CLI::App& app) const {
    RunConfig cfg;
    if (!config_file.empty()) sttd::apply_config_file(cfg, config_file);
    for (const auto& [key, value] : values) {
      if (app.count("--" + key) > 0) sttd::set_config_value(cfg, key, value);
    }
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-target detection in infrared frame sequences"};
  app.require_subcommand(1);

  Overrides detect_o, synth_o, eval_o, roc_o, rank_o;
  std::string input, output, results, truth, spec, eval_input;
  int points = 101;

  CLI::App* detect = app.add_subcommand("detect", "decompose a frame directory and segment targets");
  detect->add_option("--input", input, "directory of .pgm/.png frames")->required();
  detect->add_option("--output", output, "output directory")->required();
  detect_o.attach(*detect);

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic sequence");
  synth->add_option("--spec", spec, "scene description file")->required();
  synth->add_option("--output", output, "output directory")->required();
  synth_o.attach(*synth);

  CLI::App* eval = app.add_subcommand("eval", "per-target gains and Pd/Fa of a detect run");
  eval->add_option("--results", results, "detect output directory")->required();
  eval->add_option("--truth", truth, "truth CSV (frame,row,col,a,b)")->required();
  eval->add_option("--input", eval_input, "input frames (default: taken from run.json)");
  eval_o.attach(*eval);

  CLI::App* roc = app.add_subcommand("roc", "threshold-swept ROC of a detect run");
  roc->add_option("--results", results, "detect output directory")->required();
  roc->add_option("--truth", truth, "truth CSV")->required();
  roc->add_option("--points", points, "number of thresholds")->check(CLI::Range(2, 1000000));
  roc_o.attach(*roc);

  CLI::App* rank = app.add_subcommand("rank", "singular values of the three unfoldings");
  rank->add_option("--input", input, "directory of frames")->required();
  rank->add_option("--output", output, "output directory")->required();
  rank_o.attach(*rank);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sttd::cli::kIoError;
  }

  try {
    if (detect->parsed()) {
      RunConfig cfg = detect_o.resolve(*detect);
      cfg.input = input;
      cfg.output = output;
      sttd::cli::cmd_detect(cfg);
    } else if (synth->parsed()) {
      std::optional<std::uint64_t> seed;
      if (synth->count("--seed") > 0) seed = synth_o.resolve(*synth).seed;
      sttd::cli::cmd_synth(spec, output, seed);
    } else if (eval->parsed()) {
      const RunConfig cfg = eval_o.resolve(*eval);
      std::optional<std::filesystem::path> in;
      if (!eval_input.empty()) in = eval_input;
      sttd::cli::cmd_eval(results, truth, cfg, in);
    } else if (roc->parsed()) {
      sttd::cli::cmd_roc(results, truth, points, roc_o.resolve(*roc));
    } else if (rank->parsed()) {
      sttd::cli::cmd_rank(input, output, rank_o.resolve(*rank).solver.L);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sttd: %s\n", e.what());
    return sttd::cli::exit_code_for(e);
  }
  return 0;
}
