#pragma once

#include "sttd/metrics.hpp"
#include "sttd/pipeline.hpp"
#include "sttd/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sttd {

/// Every tunable of a run. Defaults are the reference parameter set.
struct RunConfig {
  SolverParams solver;
  SegmentationParams segmentation;
  WindowGeometry geometry;
  double match_radius = 4.0;
  FaCount fa_count = FaCount::Pixels;
  int roc_points = 101;
  int threads = 0;  ///< 0 = STTD_THREADS, then all cores
  std::uint64_t seed = 0;
  std::string input;
  std::string output;

  void validate() const;
};

/// Keys accepted by set_config_value, in the order to_text writes them.
[[nodiscard]] const std::vector<std::string>& config_keys();

/// Sets one key (e.g. "lambda-tv", "tv-mode"). Underscores and dashes are
/// interchangeable. Throws InvalidArgument for unknown keys or bad values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Applies key=value lines ('#' starts a comment) on top of `cfg`.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// key=value text that reproduces `cfg` through apply_config_text.
[[nodiscard]] std::string to_text(const RunConfig& cfg);

}  // namespace sttd
