#include "sttd/pipeline.hpp"

#include "sttd/error.hpp"
#include "sttd/parallel.hpp"

#include <cmath>
#include <string>

namespace sttd {

std::vector<GroupSpan> plan_groups(std::size_t frames, int L) {
  if (L < 2) throw InvalidArgument("group length L must be >= 2");
  const auto len = std::size_t(L);
  if (frames < len) {
    throw SequenceTooShort("sequence has " + std::to_string(frames) + " frames, group length is " +
                           std::to_string(L));
  }
  std::vector<GroupSpan> spans;
  std::size_t start = 0;
  for (; start + len <= frames; start += len) spans.push_back({start, len, 0});
  if (start < frames) {
    const std::size_t tail = frames - len;
    spans.push_back({tail, len, start - tail});
  }
  return spans;
}

Tensor3 stack_frames(const FrameSequence& seq, std::size_t start, std::size_t length) {
  if (start + length > seq.size()) throw InvalidArgument("stack_frames: range past the sequence end");
  const auto rows = std::size_t(seq.rows());
  const auto cols = std::size_t(seq.cols());
  Tensor3 t(rows, cols, length);
  for (std::size_t k = 0; k < length; ++k) {
    const Image& f = seq.frames[start + k];
    if (std::size_t(f.rows()) != rows || std::size_t(f.cols()) != cols) {
      throw DimensionMismatch("frame " + std::to_string(start + k) + " has a different size");
    }
    t.slice(k) = f;
  }
  return t;
}

std::vector<Tensor3> group_frames(const FrameSequence& seq, int L) {
  seq.validate();
  std::vector<Tensor3> groups;
  for (const GroupSpan& g : plan_groups(seq.size(), L)) {
    groups.push_back(stack_frames(seq, g.start, g.length));
  }
  return groups;
}

FrameImages reconstruct(const std::vector<Decomposition>& groups, const std::vector<GroupSpan>& spans) {
  if (groups.size() != spans.size()) throw InvalidArgument("reconstruct: groups and spans differ in count");
  std::size_t frames = 0;
  for (const GroupSpan& s : spans) frames = std::max(frames, s.start + s.length);
  FrameImages out;
  out.background.resize(frames);
  out.target.resize(frames);
  out.noise.resize(frames);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Decomposition& d = groups[g];
    const GroupSpan& s = spans[g];
    if (d.B.n3() != s.length) throw DimensionMismatch("reconstruct: group depth does not match its span");
    for (std::size_t k = s.first_owned; k < s.length; ++k) {
      out.background[s.start + k] = d.B.slice(k);
      out.target[s.start + k] = d.T.slice(k);
      out.noise[s.start + k] = d.N.slice(k);
    }
  }
  return out;
}

Segmentation segment(const Image& target, double k, double vmin) {
  if (!target.allFinite()) throw InvalidArgument("segment: target image is not finite");
  Segmentation s;
  const Image norm = max_normalize(target);
  const double n = double(norm.size());
  const double mean = n > 0 ? norm.sum() / n : 0.0;
  const double var = n > 0 ? (norm.array() - mean).square().sum() / n : 0.0;
  s.threshold = std::max(vmin, mean + k * std::sqrt(var));
  s.mask = (norm.array() > s.threshold).cast<std::uint8_t>();
  s.components = label_components(s.mask, norm);
  return s;
}

std::vector<Mask> DetectionResult::masks() const {
  std::vector<Mask> m;
  m.reserve(frames.size());
  for (const Segmentation& s : frames) m.push_back(s.mask);
  return m;
}

DetectionResult detect(const FrameSequence& seq, const SolverParams& params,
                       const SegmentationParams& seg) {
  params.validate();
  seq.validate();
  const std::vector<GroupSpan> spans = plan_groups(seq.size(), params.L);
  const Dims dims{std::size_t(seq.rows()), std::size_t(seq.cols()), std::size_t(params.L)};
  const auto spectra = make_spectra(dims, params);

  std::vector<Decomposition> groups(spans.size());
  parallel_for(spans.size(), [&](std::size_t g) {
    groups[g] = decompose(stack_frames(seq, spans[g].start, spans[g].length), params, spectra);
  });

  DetectionResult result;
  for (std::size_t g = 0; g < spans.size(); ++g) {
    result.groups.push_back({spans[g].start, spans[g].length, groups[g].iterations,
                             groups[g].final_residual, groups[g].converged});
  }
  result.images = reconstruct(groups, spans);
  result.frames.resize(seq.size());
  parallel_for(seq.size(), [&](std::size_t f) {
    result.frames[f] = segment(result.images.target[f], seg.k, seg.vmin);
  });
  return result;
}

}  // namespace sttd
