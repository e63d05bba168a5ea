#include "sttd/synth.hpp"

#include "sttd/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace sttd {

// ---------------------------------------------------------------------------
// Random numbers

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kCloudStream = 2;

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t x = seed;
  std::uint64_t h = splitmix64(x);
  x = h ^ (stream * 0xd1b54a32d192ed03ULL);
  h = splitmix64(x);
  x = h ^ (index * 0xaf251af3b0f025b5ULL);
  return splitmix64(x);
}

// ---------------------------------------------------------------------------
// Spec helpers

std::string_view to_string(BackgroundKind k) {
  switch (k) {
    case BackgroundKind::Flat: return "flat";
    case BackgroundKind::Gradient: return "gradient";
    case BackgroundKind::Cloud: return "cloud";
  }
  return "flat";
}

BackgroundKind parse_background_kind(std::string_view s) {
  if (s == "flat") return BackgroundKind::Flat;
  if (s == "gradient" || s == "linear-gradient") return BackgroundKind::Gradient;
  if (s == "cloud" || s == "smoothed-noise") return BackgroundKind::Cloud;
  throw InvalidArgument("unknown background kind '" + std::string(s) + "'");
}

void SceneSpec::validate() const {
  if (height < 1 || width < 1 || frames < 1) throw InvalidArgument("scene: dims must be positive");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("scene: noise sigma must be >= 0");
  if (scr_window_d < 1) throw InvalidArgument("scene: scr_window_d must be >= 1");
  if (background.kind == BackgroundKind::Cloud && !(background.cloud_scale > 0.0)) {
    throw InvalidArgument("scene: cloud_scale must be positive");
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const TargetSpec& ts = targets[t];
    if (ts.a < 1 || ts.b < 1) throw InvalidArgument("scene: target box must be at least 1x1");
    if (!ts.scr && !ts.amplitude) {
      throw InvalidArgument("scene: target " + std::to_string(t) + " needs scr or amplitude");
    }
    for (long f : {0L, frames - 1}) {
      const double r = ts.row + double(f) * ts.vrow;
      const double c = ts.col + double(f) * ts.vcol;
      if (r < 0.0 || c < 0.0 || r > double(height - 1) || c > double(width - 1)) {
        throw InvalidArgument("scene: target " + std::to_string(t) + " leaves the image");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Rendering

Image noise_field(Eigen::Index rows, Eigen::Index cols, double sigma, std::uint64_t seed,
                  std::uint64_t frame) {
  Image n = Image::Zero(rows, cols);
  if (sigma == 0.0) return n;
  Rng rng(Rng::derive(seed, kNoiseStream, frame));
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) n(r, c) = sigma * rng.normal();
  return n;
}

FrameSequence add_noise(const FrameSequence& seq, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidArgument("add_noise: sigma must be >= 0");
  FrameSequence out = seq;
  if (sigma == 0.0) return out;
  for (std::size_t f = 0; f < out.frames.size(); ++f) {
    Image& img = out.frames[f];
    img = (img + noise_field(img.rows(), img.cols(), sigma, seed, f)).cwiseMax(0.0).cwiseMin(1.0);
  }
  return out;
}

namespace {

Eigen::VectorXd gaussian_kernel(double sigma) {
  const int radius = std::max(1, int(std::ceil(3.0 * sigma)));
  Eigen::VectorXd k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) k(i + radius) = std::exp(-0.5 * (i * i) / (sigma * sigma));
  return k / k.sum();
}

// Separable blur with clamp-to-edge borders.
Image blur(const Image& src, double sigma) {
  const Eigen::VectorXd k = gaussian_kernel(sigma);
  const int radius = int(k.size() / 2);
  const Eigen::Index rows = src.rows();
  const Eigen::Index cols = src.cols();
  Image tmp(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const Eigen::Index rr = std::clamp<Eigen::Index>(r + i, 0, rows - 1);
        s += k(i + radius) * src(rr, c);
      }
      tmp(r, c) = s;
    }
  Image out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const Eigen::Index cc = std::clamp<Eigen::Index>(c + i, 0, cols - 1);
        s += k(i + radius) * tmp(r, cc);
      }
      out(r, c) = s;
    }
  return out;
}

double bilinear(const Image& img, double r, double c) {
  const double rf = std::floor(r);
  const double cf = std::floor(c);
  const Eigen::Index r0 = std::clamp<Eigen::Index>(Eigen::Index(rf), 0, img.rows() - 1);
  const Eigen::Index c0 = std::clamp<Eigen::Index>(Eigen::Index(cf), 0, img.cols() - 1);
  const Eigen::Index r1 = std::min<Eigen::Index>(r0 + 1, img.rows() - 1);
  const Eigen::Index c1 = std::min<Eigen::Index>(c0 + 1, img.cols() - 1);
  const double fr = r - rf;
  const double fc = c - cf;
  return (1 - fr) * ((1 - fc) * img(r0, c0) + fc * img(r0, c1)) +
         fr * ((1 - fc) * img(r1, c0) + fc * img(r1, c1));
}

class BackgroundRenderer {
 public:
  BackgroundRenderer(const SceneSpec& spec) : spec_(spec) {
    const BackgroundSpec& bg = spec.background;
    if (bg.kind != BackgroundKind::Cloud) return;
    pad_r_ = long(std::ceil(std::abs(bg.drift_row) * double(spec.frames))) + 2;
    pad_c_ = long(std::ceil(std::abs(bg.drift_col) * double(spec.frames))) + 2;
    const long margin = long(std::ceil(3.0 * bg.cloud_scale));
    const Eigen::Index rows = spec.height + 2 * (pad_r_ + margin);
    const Eigen::Index cols = spec.width + 2 * (pad_c_ + margin);
    Rng rng(Rng::derive(spec.seed, kCloudStream, 0));
    Image white(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) white(r, c) = rng.normal();
    const Image smooth = blur(white, bg.cloud_scale);
    field_ = smooth.block(margin, margin, spec.height + 2 * pad_r_, spec.width + 2 * pad_c_);
    const double lo = field_.minCoeff();
    const double hi = field_.maxCoeff();
    const double mean = field_.mean();
    field_ = (field_.array() - mean) / (hi > lo ? hi - lo : 1.0);
  }

  Image render(long frame) const {
    const BackgroundSpec& bg = spec_.background;
    Image img(spec_.height, spec_.width);
    for (long c = 0; c < spec_.width; ++c) {
      for (long r = 0; r < spec_.height; ++r) {
        double v = bg.level;
        switch (bg.kind) {
          case BackgroundKind::Flat:
            break;
          case BackgroundKind::Gradient: {
            const double fr = spec_.height > 1 ? double(r) / double(spec_.height - 1) - 0.5 : 0.0;
            const double fc = spec_.width > 1 ? double(c) / double(spec_.width - 1) - 0.5 : 0.0;
            v += bg.gradient_row * fr + bg.gradient_col * fc;
            break;
          }
          case BackgroundKind::Cloud: {
            const double sr = double(r + pad_r_) + bg.drift_row * double(frame);
            const double sc = double(c + pad_c_) + bg.drift_col * double(frame);
            v += bg.cloud_amplitude * bilinear(field_, sr, sc);
            break;
          }
        }
        img(r, c) = std::clamp(v, 0.0, 1.0);
      }
    }
    return img;
  }

 private:
  const SceneSpec& spec_;
  Image field_;
  long pad_r_ = 0;
  long pad_c_ = 0;
};

// Adds amplitude * truncated Gaussian inside the target box, clipping to [0, 1].
void add_blob(Image& img, const Target& t, double amplitude) {
  const double sigma = double(std::min(t.a, t.b)) / 3.0;
  const Box box = Box::centered(t.row, t.col, t.a, t.b).clip(img.rows(), img.cols());
  for (long c = box.col0; c < box.col0 + box.cols; ++c) {
    for (long r = box.row0; r < box.row0 + box.rows; ++r) {
      const double dr = double(r) - t.row;
      const double dc = double(c) - t.col;
      const double g = amplitude * std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
      img(r, c) = std::clamp(img(r, c) + g, 0.0, 1.0);
    }
  }
}

Image compose(const Image& base, const Target& t, double amplitude, const Image& noise) {
  Image img = base;
  add_blob(img, t, amplitude);
  return (img + noise).cwiseMax(0.0).cwiseMin(1.0);
}

// Signed SCR so that dark-on-bright configurations never count as a match.
double signed_scr(const Image& img, const Target& t, long d) {
  const RegionStats s = region_stats(img, t, WindowGeometry{d, t.a, t.b});
  if (s.ring_std == 0.0) {
    return s.target_mean > s.ring_mean ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return (s.target_mean - s.ring_mean) / s.ring_std;
}

double calibrate_amplitude(const Image& base, const Target& t, const Image& noise, double wanted,
                           long d, std::size_t frame) {
  auto measure = [&](double amp) { return signed_scr(compose(base, t, amp, noise), t, d); };
  constexpr int kScan = 64;
  double lo = 0.0;
  double hi = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double amp = double(i) / kScan;
    if (measure(amp) >= wanted) {
      hi = amp;
      break;
    }
    lo = amp;
  }
  if (hi < 0.0) {
    throw Infeasible("target SCR " + std::to_string(wanted) + " unreachable with amplitude <= 1 in frame " +
                     std::to_string(frame));
  }
  for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = measure(mid);
    if (std::abs(s - wanted) <= 1e-3 * wanted) return mid;
    (s < wanted ? lo : hi) = mid;
  }
  const double achieved = measure(hi);
  if (std::abs(achieved - wanted) > 0.05 * wanted) {
    throw Infeasible("target SCR " + std::to_string(wanted) + " cannot be matched within 5% in frame " +
                     std::to_string(frame));
  }
  return hi;
}

}  // namespace

SyntheticScene generate(const SceneSpec& spec) {
  spec.validate();
  SyntheticScene scene;
  scene.sequence.source = "synthetic";
  scene.sequence.bit_depth = 0;
  scene.truth.frames.resize(std::size_t(spec.frames));
  scene.amplitudes.resize(std::size_t(spec.frames));
  BackgroundRenderer background(spec);

  for (long f = 0; f < spec.frames; ++f) {
    Image clean = background.render(f);
    const Image noise = noise_field(spec.height, spec.width, spec.noise_sigma, spec.seed,
                                    std::uint64_t(f));
    for (const TargetSpec& ts : spec.targets) {
      const Target t{ts.row + double(f) * ts.vrow, ts.col + double(f) * ts.vcol, ts.a, ts.b};
      const double amp = ts.scr ? calibrate_amplitude(clean, t, noise, *ts.scr, spec.scr_window_d,
                                                      std::size_t(f))
                                : *ts.amplitude;
      add_blob(clean, t, amp);
      scene.truth.frames[std::size_t(f)].push_back(t);
      scene.amplitudes[std::size_t(f)].push_back(amp);
    }
    scene.sequence.frames.push_back((clean + noise).cwiseMax(0.0).cwiseMin(1.0));
  }
  return scene;
}

// ---------------------------------------------------------------------------
// Scene description parsing

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidArgument("scene: '" + key + "' expects a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw InvalidArgument("scene: '" + key + "' expects an integer");
  return long(d);
}

TargetSpec parse_target(const std::string& value) {
  TargetSpec t;
  std::istringstream is(value);
  std::string token;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidArgument("scene: bad target field '" + token + "'");
    const std::string k = token.substr(0, eq);
    const std::string v = token.substr(eq + 1);
    if (k == "row") t.row = to_double(k, v);
    else if (k == "col") t.col = to_double(k, v);
    else if (k == "vrow") t.vrow = to_double(k, v);
    else if (k == "vcol") t.vcol = to_double(k, v);
    else if (k == "a") t.a = to_long(k, v);
    else if (k == "b") t.b = to_long(k, v);
    else if (k == "scr") t.scr = to_double(k, v);
    else if (k == "amplitude") t.amplitude = to_double(k, v);
    else throw InvalidArgument("scene: unknown target field '" + k + "'");
  }
  return t;
}

}  // namespace

SceneSpec parse_scene_spec(const std::string& text) {
  SceneSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("scene: line " + std::to_string(lineno) + " is not key=value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    BackgroundSpec& bg = spec.background;
    if (key == "height") spec.height = to_long(key, value);
    else if (key == "width") spec.width = to_long(key, value);
    else if (key == "frames") spec.frames = to_long(key, value);
    else if (key == "seed") spec.seed = std::uint64_t(to_long(key, value));
    else if (key == "noise_sigma") spec.noise_sigma = to_double(key, value);
    else if (key == "noise_sigma_8bit") spec.noise_sigma = to_double(key, value) / 255.0;
    else if (key == "scr_window_d") spec.scr_window_d = to_long(key, value);
    else if (key == "background") bg.kind = parse_background_kind(value);
    else if (key == "background.level") bg.level = to_double(key, value);
    else if (key == "background.gradient_row") bg.gradient_row = to_double(key, value);
    else if (key == "background.gradient_col") bg.gradient_col = to_double(key, value);
    else if (key == "background.cloud_amplitude") bg.cloud_amplitude = to_double(key, value);
    else if (key == "background.cloud_scale") bg.cloud_scale = to_double(key, value);
    else if (key == "background.drift_row") bg.drift_row = to_double(key, value);
    else if (key == "background.drift_col") bg.drift_col = to_double(key, value);
    else if (key == "target") spec.targets.push_back(parse_target(value));
    else throw InvalidArgument("scene: unknown key '" + key + "' on line " + std::to_string(lineno));
  }
  spec.validate();
  return spec;
}

SceneSpec load_scene_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene spec '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_scene_spec(os.str());
}

}  // namespace sttd
