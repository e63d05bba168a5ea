#include "sttd/error.hpp"
#include "sttd/parallel.hpp"
#include "sttd/pipeline.hpp"
#include "sttd/synth.hpp"

#include <gtest/gtest.h>

using namespace sttd;

namespace {

FrameSequence ramp_sequence(std::size_t frames, Eigen::Index rows = 4, Eigen::Index cols = 5) {
  FrameSequence seq;
  for (std::size_t f = 0; f < frames; ++f) seq.frames.push_back(Image::Constant(rows, cols, double(f)));
  return seq;
}

}  // namespace

TEST(Box, CenteredAndClipped) {
  EXPECT_EQ(Box::centered(5.0, 7.0, 3, 3), (Box{4, 6, 3, 3}));
  EXPECT_EQ(Box::centered(5.4, 6.6, 4, 2), (Box{4, 7, 4, 2}));
  EXPECT_EQ(Box::centered(1.0, 1.0, 3, 3).grown(2), (Box{-2, -2, 7, 7}));
  EXPECT_EQ((Box{-2, -2, 7, 7}).clip(4, 10), (Box{0, 0, 4, 5}));
  EXPECT_TRUE((Box{3, 3, 0, 2}).empty());
}

TEST(MaxNormalize, ClampsAndScales) {
  Image img(2, 2);
  img << -1.0, 2.0, 1.0, 4.0;
  const Image n = max_normalize(img);
  EXPECT_EQ(n(0, 0), 0.0);
  EXPECT_EQ(n(1, 1), 1.0);
  EXPECT_EQ(n(1, 0), 0.25);
  EXPECT_EQ(max_normalize(Image::Constant(3, 3, -2.0)), Image::Zero(3, 3));
}

TEST(LabelComponents, EightConnectivityAndOrder) {
  Mask m = Mask::Zero(5, 5);
  m(0, 3) = 1;
  m(1, 4) = 1;  // diagonal neighbour of (0, 3)
  m(3, 0) = 1;
  m(4, 0) = 1;
  m(4, 4) = 1;
  Image v = Image::Zero(5, 5);
  v(1, 4) = 0.7;
  const auto comps = label_components(m, v);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[0].pixels, 2u);
  EXPECT_DOUBLE_EQ(comps[0].row, 3.5);
  EXPECT_DOUBLE_EQ(comps[1].row, 0.5);
  EXPECT_DOUBLE_EQ(comps[1].col, 3.5);
  EXPECT_DOUBLE_EQ(comps[1].peak, 0.7);
  EXPECT_EQ(comps[2].pixels, 1u);
}

TEST(PlanGroups, ExactMultiple) {
  const auto g = plan_groups(9, 3);
  ASSERT_EQ(g.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(g[i].start, 3 * i);
    EXPECT_EQ(g[i].length, 3u);
    EXPECT_EQ(g[i].first_owned, 0u);
  }
}

TEST(PlanGroups, TailOverlapsPreviousGroup) {
  const auto g = plan_groups(10, 3);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[3].start, 7u);
  EXPECT_EQ(g[3].first_owned, 2u);
  // Every frame is owned exactly once.
  std::vector<int> owners(10, 0);
  for (const auto& s : g)
    for (std::size_t k = s.first_owned; k < s.length; ++k) ++owners[s.start + k];
  for (int o : owners) EXPECT_EQ(o, 1);
}

TEST(PlanGroups, Preconditions) {
  EXPECT_THROW((void)plan_groups(2, 3), SequenceTooShort);
  EXPECT_THROW((void)plan_groups(5, 1), InvalidArgument);
  EXPECT_EQ(plan_groups(3, 3).size(), 1u);
}

TEST(GroupFrames, StacksInOrder) {
  const auto groups = group_frames(ramp_sequence(7), 3);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0](2, 3, 1), 1.0);
  EXPECT_EQ(groups[1](0, 0, 0), 3.0);
  EXPECT_EQ(groups[2](1, 1, 0), 4.0);
  EXPECT_EQ(groups[2](1, 1, 2), 6.0);
}

TEST(Reconstruct, IdentityDecompositionRoundTrips) {
  const FrameSequence seq = ramp_sequence(8);
  const auto spans = plan_groups(seq.size(), 3);
  std::vector<Decomposition> groups;
  for (const auto& s : spans) {
    Decomposition d;
    d.B = stack_frames(seq, s.start, s.length);
    d.T = 2.0 * d.B;
    d.N = Tensor3(d.B.dims());
    groups.push_back(d);
  }
  const FrameImages out = reconstruct(groups, spans);
  ASSERT_EQ(out.background.size(), 8u);
  for (std::size_t f = 0; f < 8; ++f) {
    EXPECT_EQ(out.background[f], seq.frames[f]);
    EXPECT_EQ(out.target[f], 2.0 * seq.frames[f]);
  }
}

TEST(Segment, AdaptiveThreshold) {
  Image img = Image::Zero(10, 10);
  img(2, 2) = 1.0;
  img(2, 3) = 0.9;
  img(7, 7) = 0.5;
  const Segmentation s = segment(img, 3.0, 0.85);
  EXPECT_GE(s.threshold, 0.85);
  ASSERT_EQ(s.components.size(), 1u);
  EXPECT_EQ(s.components[0].pixels, 2u);
  EXPECT_EQ(s.mask(7, 7), 0);

  const Segmentation low = segment(img, 0.0, 0.1);
  EXPECT_EQ(low.components.size(), 2u);
  EXPECT_EQ(segment(Image::Zero(4, 4)).components.size(), 0u);
}

TEST(Detect, FindsImplantedTarget) {
  SceneSpec spec;
  spec.height = spec.width = 32;
  spec.frames = 6;
  spec.seed = 5;
  spec.background.kind = BackgroundKind::Gradient;
  spec.background.gradient_row = 0.2;
  spec.noise_sigma = 5.0 / 255;
  TargetSpec t;
  t.row = 14;
  t.col = 17;
  t.vcol = 0.5;
  t.amplitude = 0.5;
  spec.targets.push_back(t);
  const SyntheticScene scene = generate(spec);

  const DetectionResult r = detect(scene.sequence, SolverParams{});
  ASSERT_EQ(r.frames.size(), 6u);
  ASSERT_EQ(r.groups.size(), 2u);
  for (const auto& g : r.groups) EXPECT_TRUE(g.converged);
  for (std::size_t f = 0; f < 6; ++f) {
    ASSERT_EQ(r.frames[f].components.size(), 1u) << "frame " << f;
    const Target& truth = scene.truth.frames[f][0];
    EXPECT_NEAR(r.frames[f].components[0].row, truth.row, 1.0);
    EXPECT_NEAR(r.frames[f].components[0].col, truth.col, 1.0);
  }
  EXPECT_EQ(r.masks().size(), 6u);
}

TEST(Detect, ShortSequenceIsRejected) {
  EXPECT_THROW((void)detect(ramp_sequence(2), SolverParams{}), SequenceTooShort);
}

TEST(Detect, ThreadCountDoesNotChangeImages) {
  SceneSpec spec;
  spec.height = 24;
  spec.width = 20;
  spec.frames = 7;
  spec.seed = 9;
  spec.background.kind = BackgroundKind::Cloud;
  spec.noise_sigma = 0.02;
  const SyntheticScene scene = generate(spec);
  set_thread_count(1);
  const DetectionResult a = detect(scene.sequence, SolverParams{});
  set_thread_count(3);
  const DetectionResult b = detect(scene.sequence, SolverParams{});
  set_thread_count(0);
  for (std::size_t f = 0; f < 7; ++f) {
    EXPECT_EQ(a.images.target[f], b.images.target[f]);
    EXPECT_EQ(a.images.background[f], b.images.background[f]);
    EXPECT_EQ(a.frames[f].mask, b.frames[f].mask);
  }
}
