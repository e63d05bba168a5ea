#pragma once

#include "sttd/config.hpp"

#include <exception>
#include <filesystem>
#include <optional>
#include <string>

namespace sttd::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kIoError = 2,       ///< unreadable input, bad format, bad arguments
  kPrecondition = 3,  ///< e.g. fewer frames than one group
};

/// Maps an exception from a command to its exit code.
[[nodiscard]] int exit_code_for(const std::exception& e);

/// Reads cfg.input, runs detection, writes per-frame target/background/mask
/// PGMs, components.csv, run.json and timing.json into cfg.output.
void cmd_detect(const RunConfig& cfg);

/// Renders the scene file into frame_NNNN.pgm plus truth.csv.
void cmd_synth(const std::filesystem::path& spec_file, const std::filesystem::path& output,
               std::optional<std::uint64_t> seed = std::nullopt);

/// Compares target images in `results` against the input frames and writes
/// metrics.json and metrics.csv there. The input directory defaults to the
/// one recorded in run.json.
void cmd_eval(const std::filesystem::path& results, const std::filesystem::path& truth_file,
              const RunConfig& cfg, const std::optional<std::filesystem::path>& input = std::nullopt);

/// Writes roc.csv into `results` from its target images.
void cmd_roc(const std::filesystem::path& results, const std::filesystem::path& truth_file,
             int n_points, const RunConfig& cfg);

/// Stacks the first L frames and writes rank_mode{1,2,3}.csv with the
/// singular values of each unfolding.
void cmd_rank(const std::filesystem::path& input, const std::filesystem::path& output, int L);

/// Per-frame file names used by cmd_detect.
[[nodiscard]] std::string frame_file(const std::string& stem, std::size_t frame);

}  // namespace sttd::cli
