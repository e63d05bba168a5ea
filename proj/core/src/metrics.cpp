#include "sttd/metrics.hpp"

#include "sttd/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

namespace sttd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Measurement sentinel(MetricStatus status, bool clipped) { return {kInf, status, clipped}; }

// out / in with the sentinel rules shared by every gain.
Measurement gain(const Measurement& in, const Measurement& out) {
  const bool clipped = in.clipped || out.clipped;
  if (!out.ok()) return sentinel(out.status, clipped);
  if (!in.ok() || in.value == 0.0) return sentinel(MetricStatus::DivisionByZero, clipped);
  return {out.value / in.value, MetricStatus::Ok, clipped};
}

}  // namespace

std::size_t TargetTruth::target_count() const {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.size();
  return n;
}

void TargetTruth::validate(Eigen::Index height, Eigen::Index width) const {
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (const Target& t : frames[f]) {
      if (t.a < 1 || t.b < 1) throw InvalidArgument("truth: target box must be at least 1x1");
      if (t.row < 0.0 || t.col < 0.0 || t.row > double(height - 1) || t.col > double(width - 1)) {
        throw InvalidArgument("truth: centroid outside image in frame " + std::to_string(f));
      }
    }
  }
}

RegionStats region_stats(const Image& img, const Target& t, const WindowGeometry& g) {
  const Box core_full = Box::centered(t.row, t.col, g.a, g.b);
  const Box window_full = core_full.grown(g.d);
  const Box core = core_full.clip(img.rows(), img.cols());
  const Box window = window_full.clip(img.rows(), img.cols());

  RegionStats s;
  s.clipped = !(window == window_full) || !(core == core_full);
  s.target_max = -kInf;
  s.ring_max = -kInf;
  double ring_min = kInf;

  double t_sum = 0.0;
  for (long c = core.col0; c < core.col0 + core.cols; ++c) {
    for (long r = core.row0; r < core.row0 + core.rows; ++r) {
      const double v = img(r, c);
      t_sum += v;
      s.target_max = std::max(s.target_max, v);
      ++s.target_pixels;
    }
  }
  double b_sum = 0.0;
  for (long c = window.col0; c < window.col0 + window.cols; ++c) {
    for (long r = window.row0; r < window.row0 + window.rows; ++r) {
      if (core.contains(r, c)) continue;
      const double v = img(r, c);
      b_sum += v;
      s.ring_max = std::max(s.ring_max, v);
      ring_min = std::min(ring_min, v);
      ++s.ring_pixels;
    }
  }
  s.target_mean = s.target_pixels ? t_sum / double(s.target_pixels) : 0.0;
  s.ring_mean = s.ring_pixels ? b_sum / double(s.ring_pixels) : 0.0;
  double b_var = 0.0;
  for (long c = window.col0; c < window.col0 + window.cols; ++c) {
    for (long r = window.row0; r < window.row0 + window.rows; ++r) {
      if (core.contains(r, c)) continue;
      const double dv = img(r, c) - s.ring_mean;
      b_var += dv * dv;
    }
  }
  // A constant ring has exactly zero spread; the mean may carry rounding.
  const bool flat = s.ring_pixels == 0 || ring_min == s.ring_max;
  s.ring_std = flat ? 0.0 : std::sqrt(b_var / double(s.ring_pixels));
  return s;
}

Measurement scr(const Image& img, const Target& t, const WindowGeometry& g) {
  const RegionStats s = region_stats(img, t, g);
  if (s.ring_pixels == 0 || s.target_pixels == 0 || s.ring_std == 0.0) {
    return sentinel(MetricStatus::DegenerateBackground, s.clipped);
  }
  return {std::abs(s.target_mean - s.ring_mean) / s.ring_std, MetricStatus::Ok, s.clipped};
}

Measurement con(const Image& img, const Target& t, const WindowGeometry& g) {
  const RegionStats s = region_stats(img, t, g);
  if (s.ring_pixels == 0 || s.target_pixels == 0) {
    return sentinel(MetricStatus::DegenerateBackground, s.clipped);
  }
  return {std::abs(s.target_mean - s.ring_mean), MetricStatus::Ok, s.clipped};
}

Measurement lsnr(const Image& img, const Target& t, const WindowGeometry& g) {
  const RegionStats s = region_stats(img, t, g);
  if (s.ring_pixels == 0 || s.target_pixels == 0) {
    return sentinel(MetricStatus::DegenerateBackground, s.clipped);
  }
  if (s.ring_max == 0.0) return sentinel(MetricStatus::DivisionByZero, s.clipped);
  return {s.target_max / s.ring_max, MetricStatus::Ok, s.clipped};
}

Measurement scrg(const Image& in, const Image& out, const Target& t, const WindowGeometry& g) {
  return gain(scr(in, t, g), scr(out, t, g));
}

Measurement lsnrg(const Image& in, const Image& out, const Target& t, const WindowGeometry& g) {
  return gain(lsnr(in, t, g), lsnr(out, t, g));
}

Measurement cg(const Image& in, const Image& out, const Target& t, const WindowGeometry& g) {
  return gain(con(in, t, g), con(out, t, g));
}

Measurement bsf(const Image& in, const Image& out, const Target& t, const WindowGeometry& g) {
  const RegionStats si = region_stats(in, t, g);
  const RegionStats so = region_stats(out, t, g);
  const bool clipped = si.clipped || so.clipped;
  if (si.ring_pixels == 0) return sentinel(MetricStatus::DegenerateBackground, clipped);
  if (so.ring_std == 0.0) return sentinel(MetricStatus::DegenerateBackground, clipped);
  return {si.ring_std / so.ring_std, MetricStatus::Ok, clipped};
}

FrameMatch match_components(const std::vector<Component>& comps,
                            const std::vector<Target>& targets, double radius) {
  FrameMatch m;
  m.component_target.assign(comps.size(), -1);
  m.target_component.assign(targets.size(), -1);
  std::vector<std::tuple<double, int, int>> pairs;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const double dist = std::hypot(comps[c].row - targets[t].row, comps[c].col - targets[t].col);
      if (dist <= radius) pairs.emplace_back(dist, int(c), int(t));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [dist, c, t] : pairs) {
    if (m.component_target[c] >= 0 || m.target_component[t] >= 0) continue;
    m.component_target[c] = t;
    m.target_component[t] = c;
  }
  return m;
}

PdFa pd_fa(const std::vector<Mask>& masks, const TargetTruth& truth, double match_radius,
           FaCount fa_count) {
  if (masks.size() != truth.frames.size()) {
    throw DimensionMismatch("pd_fa: " + std::to_string(masks.size()) + " masks but " +
                            std::to_string(truth.frames.size()) + " truth frames");
  }
  PdFa r;
  for (std::size_t f = 0; f < masks.size(); ++f) {
    const auto comps = label_components(masks[f]);
    const auto& targets = truth.frames[f];
    const FrameMatch m = match_components(comps, targets, match_radius);
    r.targets += targets.size();
    r.total_pixels += std::size_t(masks[f].size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (m.component_target[c] >= 0) {
        ++r.true_detections;
      } else {
        ++r.false_components;
        r.false_pixels += comps[c].pixels;
      }
    }
  }
  r.pd = r.targets ? double(r.true_detections) / double(r.targets) : 1.0;
  const std::size_t false_count = fa_count == FaCount::Pixels ? r.false_pixels : r.false_components;
  r.fa = r.total_pixels ? double(false_count) / double(r.total_pixels) : 0.0;
  return r;
}

std::vector<RocPoint> roc(const std::vector<Image>& target_images, const TargetTruth& truth,
                          int n_points, double match_radius, FaCount fa_count) {
  if (n_points < 2) throw InvalidArgument("roc: n_points must be >= 2");
  std::vector<Image> normalized;
  normalized.reserve(target_images.size());
  for (const Image& img : target_images) normalized.push_back(max_normalize(img));

  std::vector<RocPoint> points;
  points.reserve(std::size_t(n_points));
  std::vector<Mask> masks(normalized.size());
  for (int i = 0; i < n_points; ++i) {
    const double threshold = double(i) / double(n_points - 1);
    for (std::size_t f = 0; f < normalized.size(); ++f) {
      masks[f] = (normalized[f].array() > threshold).cast<std::uint8_t>();
    }
    const PdFa r = pd_fa(masks, truth, match_radius, fa_count);
    points.push_back({threshold, r.fa, r.pd});
  }
  std::stable_sort(points.begin(), points.end(), [](const RocPoint& x, const RocPoint& y) {
    return x.fa != y.fa ? x.fa < y.fa : x.pd < y.pd;
  });
  double best = 0.0;
  for (RocPoint& p : points) {
    best = std::max(best, p.pd);
    p.pd = best;
  }
  return points;
}

double roc_auc(const std::vector<RocPoint>& points) {
  if (points.empty()) return 0.0;
  double area = 0.0;
  double prev_fa = 0.0;
  double prev_pd = points.front().pd;
  for (const RocPoint& p : points) {
    area += (p.fa - prev_fa) * 0.5 * (p.pd + prev_pd);
    prev_fa = p.fa;
    prev_pd = p.pd;
  }
  area += (1.0 - prev_fa) * prev_pd;
  return area;
}

std::vector<TargetMetrics> target_metrics(const std::vector<Image>& inputs,
                                          const std::vector<Image>& outputs,
                                          const TargetTruth& truth, const WindowGeometry& g) {
  if (inputs.size() != outputs.size() || inputs.size() != truth.frames.size()) {
    throw DimensionMismatch("target_metrics: inputs, outputs and truth differ in frame count");
  }
  std::vector<TargetMetrics> rows;
  for (std::size_t f = 0; f < inputs.size(); ++f) {
    for (std::size_t t = 0; t < truth.frames[f].size(); ++t) {
      const Target& tg = truth.frames[f][t];
      rows.push_back({f, t, tg.row, tg.col, lsnrg(inputs[f], outputs[f], tg, g),
                      bsf(inputs[f], outputs[f], tg, g), scrg(inputs[f], outputs[f], tg, g),
                      cg(inputs[f], outputs[f], tg, g)});
    }
  }
  return rows;
}

MetricsReport evaluate(const std::vector<Image>& inputs, const std::vector<Image>& outputs,
                       const std::vector<Mask>& masks, const TargetTruth& truth,
                       const EvaluationOptions& options) {
  MetricsReport report;
  report.targets = target_metrics(inputs, outputs, truth, options.geometry);
  double sum = 0.0;
  std::size_t n = 0;
  for (const TargetMetrics& t : report.targets) {
    if (t.cg.ok()) {
      sum += t.cg.value;
      ++n;
    }
  }
  report.average_cg = n ? sum / double(n) : 0.0;
  report.detection = pd_fa(masks, truth, options.match_radius, options.fa_count);
  if (options.roc_points > 0) {
    report.roc = roc(outputs, truth, options.roc_points, options.match_radius, options.fa_count);
  }
  return report;
}

std::string format_fixed(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000" so equal values always print identically.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

namespace {

nlohmann::json measurement_json(const Measurement& m) {
  nlohmann::json j;
  if (std::isfinite(m.value)) {
    j["value"] = m.value;
  } else {
    j["value"] = nullptr;
  }
  switch (m.status) {
    case MetricStatus::Ok: j["status"] = "ok"; break;
    case MetricStatus::DegenerateBackground: j["status"] = "degenerate_background"; break;
    case MetricStatus::DivisionByZero: j["status"] = "division_by_zero"; break;
  }
  j["clipped"] = m.clipped;
  return j;
}

}  // namespace

std::string to_json(const MetricsReport& report) {
  nlohmann::json j;
  nlohmann::json rows = nlohmann::json::array();
  for (const TargetMetrics& t : report.targets) {
    rows.push_back({{"frame", t.frame},
                    {"target", t.target},
                    {"row", t.row},
                    {"col", t.col},
                    {"lsnrg", measurement_json(t.lsnrg)},
                    {"bsf", measurement_json(t.bsf)},
                    {"scrg", measurement_json(t.scrg)},
                    {"cg", measurement_json(t.cg)}});
  }
  j["targets"] = rows;
  j["average_cg"] = report.average_cg;
  j["detection"] = {{"pd", report.detection.pd},
                    {"fa", report.detection.fa},
                    {"true_detections", report.detection.true_detections},
                    {"targets", report.detection.targets},
                    {"false_pixels", report.detection.false_pixels},
                    {"false_components", report.detection.false_components},
                    {"total_pixels", report.detection.total_pixels}};
  nlohmann::json roc_points = nlohmann::json::array();
  for (const RocPoint& p : report.roc) {
    roc_points.push_back({{"threshold", p.threshold}, {"fa", p.fa}, {"pd", p.pd}});
  }
  j["roc"] = roc_points;
  return j.dump(2) + "\n";
}

std::string to_csv(const std::vector<TargetMetrics>& rows) {
  std::ostringstream os;
  os << "frame,target,row,col,lsnrg,bsf,scrg,cg,clipped\n";
  for (const TargetMetrics& t : rows) {
    const bool clipped = t.lsnrg.clipped || t.bsf.clipped || t.scrg.clipped || t.cg.clipped;
    os << t.frame << ',' << t.target << ',' << format_fixed(t.row) << ',' << format_fixed(t.col)
       << ',' << format_fixed(t.lsnrg.value) << ',' << format_fixed(t.bsf.value) << ','
       << format_fixed(t.scrg.value) << ',' << format_fixed(t.cg.value) << ','
       << (clipped ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string roc_to_csv(const std::vector<RocPoint>& points) {
  std::ostringstream os;
  os << "threshold,fa,pd\n";
  for (const RocPoint& p : points) {
    os << format_fixed(p.threshold) << ',' << format_fixed(p.fa) << ',' << format_fixed(p.pd)
       << '\n';
  }
  return os.str();
}

}  // namespace sttd
