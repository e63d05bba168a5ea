#pragma once

#include "sttd/image.hpp"
#include "sttd/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sttd {

enum class BackgroundKind {
  Flat,      ///< constant level
  Gradient,  ///< linear ramp whose centre sits at level
  Cloud,     ///< level plus Gaussian-smoothed white noise
};

[[nodiscard]] std::string_view to_string(BackgroundKind k);
[[nodiscard]] BackgroundKind parse_background_kind(std::string_view s);

struct BackgroundSpec {
  BackgroundKind kind = BackgroundKind::Flat;
  double level = 0.2;
  double gradient_row = 0.0;  ///< total rise from top to bottom row
  double gradient_col = 0.0;  ///< total rise from left to right column
  double cloud_amplitude = 0.3;  ///< peak-to-peak range of the cloud texture
  double cloud_scale = 4.0;      ///< smoothing standard deviation in pixels
  double drift_row = 0.0;  ///< background motion in pixels per frame
  double drift_col = 0.0;
};

/// A target moving on a straight line: centroid(f) = start + f * velocity.
/// Exactly one of scr / amplitude is used; scr wins when both are set.
struct TargetSpec {
  double row = 0.0;
  double col = 0.0;
  double vrow = 0.0;
  double vcol = 0.0;
  long a = 3;
  long b = 3;
  std::optional<double> scr;
  std::optional<double> amplitude;
};

struct SceneSpec {
  long height = 64;
  long width = 64;
  long frames = 30;
  BackgroundSpec background;
  std::vector<TargetSpec> targets;
  double noise_sigma = 0.0;  ///< on the [0, 1] intensity scale
  std::uint64_t seed = 0;
  long scr_window_d = 40;  ///< neighbourhood width used when calibrating SCR

  void validate() const;
};

struct SyntheticScene {
  FrameSequence sequence;
  TargetTruth truth;
  std::vector<std::vector<double>> amplitudes;  ///< per frame, per target
};

/// Renders the scene. Each target is a Gaussian blob with sigma = min(a, b)/3
/// truncated to its a x b box, added to the background and clipped to [0, 1];
/// noise comes last and is clipped too. With an SCR request the blob
/// amplitude is found by bisection so the SCR measured on the noisy frame is
/// within 5% of the request. Throws Infeasible if amplitude 1 is not enough.
[[nodiscard]] SyntheticScene generate(const SceneSpec& spec);

/// Adds i.i.d. N(0, sigma^2) noise to every frame and clips to [0, 1].
[[nodiscard]] FrameSequence add_noise(const FrameSequence& seq, double sigma, std::uint64_t seed);

/// Deterministic noise field for one frame (what add_noise adds before clipping).
[[nodiscard]] Image noise_field(Eigen::Index rows, Eigen::Index cols, double sigma,
                                std::uint64_t seed, std::uint64_t frame);

/// Parses the key=value scene description (see README for keys).
[[nodiscard]] SceneSpec parse_scene_spec(const std::string& text);
[[nodiscard]] SceneSpec load_scene_spec(const std::string& path);

/// Portable generator: SplitMix64-seeded xoshiro256** with Box-Muller
/// normals. Identical streams on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  [[nodiscard]] std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  [[nodiscard]] double uniform();
  /// Standard normal via the Box-Muller transform.
  [[nodiscard]] double normal();

  /// Seed for an independent sub-stream, e.g. (seed, stream, frame).
  [[nodiscard]] static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream,
                                            std::uint64_t index);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sttd
