#pragma once

#include "sttd/image.hpp"
#include "sttd/solver.hpp"

#include <cstddef>
#include <vector>

namespace sttd {

/// Where a group of frames starts and which of its slices are reported.
struct GroupSpan {
  std::size_t start = 0;       ///< first frame of the group
  std::size_t length = 0;      ///< frames in the group (always L)
  std::size_t first_owned = 0; ///< first slice not already covered by an earlier group
};

/// Consecutive disjoint groups of L frames. If the length is not a multiple
/// of L the last group is the final L frames, and frames it shares with the
/// previous group stay owned by the earlier one.
/// Throws SequenceTooShort when there are fewer than L frames.
[[nodiscard]] std::vector<GroupSpan> plan_groups(std::size_t frames, int L);

/// Stacks frames [start, start + length) into an n1 x n2 x length tensor.
[[nodiscard]] Tensor3 stack_frames(const FrameSequence& seq, std::size_t start, std::size_t length);

[[nodiscard]] std::vector<Tensor3> group_frames(const FrameSequence& seq, int L);

struct FrameImages {
  std::vector<Image> background;
  std::vector<Image> target;
  std::vector<Image> noise;
};

/// Scatters group slices back to per-frame images.
[[nodiscard]] FrameImages reconstruct(const std::vector<Decomposition>& groups,
                                      const std::vector<GroupSpan>& spans);

struct Segmentation {
  Mask mask;
  std::vector<Component> components;
  double threshold = 0.0;  ///< on the max-normalized scale
};

/// Adaptive threshold max(vmin, mean + k * std) on the max-normalized image;
/// mask = normalized > threshold, components are 8-connected. Component
/// peaks are reported on the normalized scale.
[[nodiscard]] Segmentation segment(const Image& target, double k = 3.0, double vmin = 0.85);

struct GroupDiagnostics {
  std::size_t start = 0;
  std::size_t length = 0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct DetectionResult {
  FrameImages images;
  std::vector<Segmentation> frames;
  std::vector<GroupDiagnostics> groups;

  [[nodiscard]] std::vector<Mask> masks() const;
};

struct SegmentationParams {
  double k = 3.0;
  double vmin = 0.85;
};

/// Groups, decomposes every group (in parallel), reconstructs and segments.
[[nodiscard]] DetectionResult detect(const FrameSequence& seq, const SolverParams& params,
                                     const SegmentationParams& seg = {});

}  // namespace sttd
