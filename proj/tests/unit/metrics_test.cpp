#include "sttd/error.hpp"
#include "sttd/metrics.hpp"
#include "sttd/synth.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace sttd;

namespace {

Image textured(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Image img(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) img(r, c) = 0.3 + 0.1 * rng.uniform();
  return img;
}

// Direct statistics over a core of half-width h and ring of width d.
struct Naive {
  double mt = 0, mb = 0, sb = 0, maxt = -1e300, maxb = -1e300;
};

Naive naive(const Image& img, int r0, int c0, int h, int d) {
  Naive n;
  std::vector<double> ring;
  double st = 0;
  int nt = 0;
  for (int r = r0 - h - d; r <= r0 + h + d; ++r)
    for (int c = c0 - h - d; c <= c0 + h + d; ++c) {
      if (r < 0 || c < 0 || r >= img.rows() || c >= img.cols()) continue;
      const bool core = std::abs(r - r0) <= h && std::abs(c - c0) <= h;
      if (core) {
        st += img(r, c);
        ++nt;
        n.maxt = std::max(n.maxt, img(r, c));
      } else {
        ring.push_back(img(r, c));
        n.maxb = std::max(n.maxb, img(r, c));
      }
    }
  n.mt = st / nt;
  for (double v : ring) n.mb += v;
  n.mb /= double(ring.size());
  for (double v : ring) n.sb += (v - n.mb) * (v - n.mb);
  n.sb = std::sqrt(n.sb / double(ring.size()));
  return n;
}

}  // namespace

TEST(RegionMetrics, MatchNaiveDefinitions) {
  Image img = textured(40, 40, 3);
  img(20, 21) += 0.6;
  const Target t{20.0, 21.0, 3, 3};
  const WindowGeometry g{5, 3, 3};
  const Naive n = naive(img, 20, 21, 1, 5);
  EXPECT_NEAR(scr(img, t, g).value, std::abs(n.mt - n.mb) / n.sb, 1e-12);
  EXPECT_NEAR(con(img, t, g).value, std::abs(n.mt - n.mb), 1e-12);
  EXPECT_NEAR(lsnr(img, t, g).value, n.maxt / n.maxb, 1e-12);
  EXPECT_FALSE(scr(img, t, g).clipped);
  const RegionStats s = region_stats(img, t, g);
  EXPECT_EQ(s.target_pixels, 9u);
  EXPECT_EQ(s.ring_pixels, 13u * 13u - 9u);
}

TEST(RegionMetrics, BorderWindowIsClipped) {
  const Image img = textured(20, 20, 4);
  const Target t{1.0, 2.0, 3, 3};
  const WindowGeometry g{4, 3, 3};
  const Measurement m = scr(img, t, g);
  EXPECT_TRUE(m.clipped);
  const Naive n = naive(img, 1, 2, 1, 4);
  EXPECT_NEAR(m.value, std::abs(n.mt - n.mb) / n.sb, 1e-12);
}

TEST(RegionMetrics, FlatBackgroundIsDegenerate) {
  Image img = Image::Constant(15, 15, 0.2);
  img(7, 7) = 0.9;
  const Measurement m = scr(img, {7.0, 7.0, 1, 1}, {3, 1, 1});
  EXPECT_EQ(m.status, MetricStatus::DegenerateBackground);
  EXPECT_TRUE(std::isinf(m.value));
}

TEST(Gains, IdentityProcessingIsExactlyOne) {
  Image img = textured(30, 30, 5);
  img(12, 14) += 0.5;
  const Target t{12.0, 14.0, 3, 3};
  const WindowGeometry g{6, 3, 3};
  EXPECT_EQ(lsnrg(img, img, t, g).value, 1.0);
  EXPECT_EQ(bsf(img, img, t, g).value, 1.0);
  EXPECT_EQ(scrg(img, img, t, g).value, 1.0);
  EXPECT_EQ(cg(img, img, t, g).value, 1.0);
}

TEST(Gains, FollowRatioDefinitions) {
  Image in = textured(30, 30, 6);
  in(15, 15) += 0.4;
  Image out = 0.5 * in;
  out(15, 15) += 0.2;
  const Target t{15.0, 15.0, 3, 3};
  const WindowGeometry g{5, 3, 3};
  const Naive a = naive(in, 15, 15, 1, 5);
  const Naive b = naive(out, 15, 15, 1, 5);
  EXPECT_NEAR(bsf(in, out, t, g).value, a.sb / b.sb, 1e-12);
  EXPECT_NEAR(cg(in, out, t, g).value, std::abs(b.mt - b.mb) / std::abs(a.mt - a.mb), 1e-12);
  EXPECT_NEAR(scrg(in, out, t, g).value,
              (std::abs(b.mt - b.mb) / b.sb) / (std::abs(a.mt - a.mb) / a.sb), 1e-12);
  EXPECT_NEAR(lsnrg(in, out, t, g).value, (b.maxt / b.maxb) / (a.maxt / a.maxb), 1e-12);
}

TEST(Gains, SuppressedBackgroundGivesInfiniteSentinel) {
  Image in = textured(20, 20, 7);
  Image out = Image::Zero(20, 20);
  out(10, 10) = 1.0;
  const Target t{10.0, 10.0, 3, 3};
  const WindowGeometry g{4, 3, 3};
  const Measurement b = bsf(in, out, t, g);
  EXPECT_EQ(b.status, MetricStatus::DegenerateBackground);
  EXPECT_EQ(b.value, std::numeric_limits<double>::infinity());
  EXPECT_EQ(lsnrg(in, out, t, g).status, MetricStatus::DivisionByZero);
}

TEST(Matching, GreedyNearestFirst) {
  std::vector<Component> comps(2);
  comps[0].row = 10;
  comps[0].col = 10;
  comps[1].row = 10;
  comps[1].col = 12;
  const std::vector<Target> targets{{10, 13, 1, 1}, {10, 9, 1, 1}};
  const FrameMatch m = match_components(comps, targets, 3.0);
  EXPECT_EQ(m.component_target[1], 0);
  EXPECT_EQ(m.component_target[0], 1);

  const FrameMatch far = match_components(comps, targets, 0.5);
  EXPECT_EQ(far.component_target[0], -1);
  EXPECT_EQ(far.target_component[1], -1);
}

TEST(PdFa, PerfectMasks) {
  TargetTruth truth;
  std::vector<Mask> masks;
  for (int f = 0; f < 4; ++f) {
    Mask m = Mask::Zero(16, 16);
    m(5 + f, 6) = m(6 + f, 6) = 1;
    masks.push_back(m);
    truth.frames.push_back({{5.5 + f, 6.0, 2, 1}});
  }
  const PdFa r = pd_fa(masks, truth, 2.0);
  EXPECT_EQ(r.pd, 1.0);
  EXPECT_EQ(r.fa, 0.0);
  EXPECT_EQ(r.true_detections, 4u);
  EXPECT_EQ(r.total_pixels, 4u * 256u);
}

TEST(PdFa, CountsFalseAlarms) {
  TargetTruth truth;
  truth.frames = {{{3, 3, 1, 1}}, {}};
  Mask a = Mask::Zero(8, 8);
  a(3, 3) = 1;
  a(7, 0) = a(7, 1) = 1;
  Mask b = Mask::Zero(8, 8);
  b(0, 7) = 1;
  const PdFa px = pd_fa({a, b}, truth, 1.0, FaCount::Pixels);
  EXPECT_EQ(px.pd, 1.0);
  EXPECT_EQ(px.false_pixels, 3u);
  EXPECT_DOUBLE_EQ(px.fa, 3.0 / 128.0);
  const PdFa cc = pd_fa({a, b}, truth, 1.0, FaCount::Components);
  EXPECT_DOUBLE_EQ(cc.fa, 2.0 / 128.0);

  const PdFa miss = pd_fa({Mask::Zero(8, 8), b}, truth, 1.0);
  EXPECT_EQ(miss.pd, 0.0);
  EXPECT_THROW((void)pd_fa({a}, truth, 1.0), DimensionMismatch);
}

TEST(PdFa, NoTargetsMeansFullDetection) {
  TargetTruth truth;
  truth.frames.resize(1);
  EXPECT_EQ(pd_fa({Mask::Zero(4, 4)}, truth, 1.0).pd, 1.0);
}

TEST(Roc, StaircaseAndArea) {
  TargetTruth truth;
  std::vector<Image> imgs;
  for (int f = 0; f < 3; ++f) {
    Image img = Image::Zero(10, 10);
    img(4, 4) = 1.0;
    img(8, 1) = 0.3 + 0.2 * f;  // clutter below the target
    imgs.push_back(img);
    truth.frames.push_back({{4, 4, 1, 1}});
  }
  const auto pts = roc(imgs, truth, 11, 2.0);
  ASSERT_EQ(pts.size(), 11u);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LE(pts[i - 1].fa, pts[i].fa);
    EXPECT_LE(pts[i - 1].pd, pts[i].pd);
  }
  EXPECT_EQ(pts.front().fa, 0.0);
  EXPECT_EQ(pts.front().pd, 0.0);  // threshold 1 keeps nothing
  EXPECT_EQ(pts[1].fa, 0.0);
  EXPECT_EQ(pts[1].pd, 1.0);  // target separates cleanly from clutter
  EXPECT_DOUBLE_EQ(roc_auc(pts), 1.0);
  EXPECT_THROW((void)roc(imgs, truth, 1, 2.0), InvalidArgument);
}

TEST(Roc, AreaOfHandMadeCurve) {
  const std::vector<RocPoint> pts{{0.9, 0.0, 0.0}, {0.5, 0.5, 0.5}, {0.1, 0.5, 1.0}};
  // Trapezoid 0..0.5 under 0 -> 0.5, then 1.0 carried to fa = 1.
  EXPECT_DOUBLE_EQ(roc_auc(pts), 0.125 + 0.5);
  EXPECT_EQ(roc_auc({}), 0.0);
}

TEST(Report, JsonAndCsv) {
  Image img = textured(20, 20, 8);
  img(10, 10) += 0.5;
  TargetTruth truth;
  truth.frames = {{{10, 10, 3, 3}}};
  Mask m = Mask::Zero(20, 20);
  m(10, 10) = 1;
  EvaluationOptions opt;
  opt.geometry = {4, 3, 3};
  opt.roc_points = 5;
  const MetricsReport rep = evaluate({img}, {img}, {m}, truth, opt);
  EXPECT_EQ(rep.average_cg, 1.0);
  EXPECT_EQ(rep.roc.size(), 5u);
  const auto j = nlohmann::json::parse(to_json(rep));
  EXPECT_EQ(j["detection"]["pd"], 1.0);
  EXPECT_EQ(j["targets"][0]["cg"]["value"], 1.0);
  EXPECT_EQ(j["targets"][0]["cg"]["status"], "ok");
  const std::string csv = to_csv(rep.targets);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "frame,target,row,col,lsnrg,bsf,scrg,cg,clipped");
  EXPECT_NE(csv.find("0,0,10.000000,10.000000,1.000000,1.000000,1.000000,1.000000,0"), std::string::npos);
  EXPECT_EQ(roc_to_csv({{0.5, 0.25, 1.0}}), "threshold,fa,pd\n0.500000,0.250000,1.000000\n");
}

TEST(FormatFixed, Values) {
  EXPECT_EQ(format_fixed(1.5), "1.500000");
  EXPECT_EQ(format_fixed(-1e-9), "0.000000");
  EXPECT_EQ(format_fixed(std::numeric_limits<double>::infinity()), "inf");
}
