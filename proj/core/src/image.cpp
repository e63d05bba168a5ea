#include "sttd/image.hpp"

#include "sttd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sttd {

void FrameSequence::validate() const {
  if (frames.empty()) throw InvalidArgument("frame sequence is empty");
  for (const Image& f : frames) {
    if (f.rows() != frames.front().rows() || f.cols() != frames.front().cols()) {
      throw InvalidArgument("frame sequence has frames of different sizes");
    }
  }
}

Box Box::centered(double row, double col, long a, long b) {
  const long r = std::lround(row);
  const long c = std::lround(col);
  return {r - (a - 1) / 2, c - (b - 1) / 2, a, b};
}

Box Box::clip(Eigen::Index height, Eigen::Index width) const {
  const long r0 = std::max<long>(row0, 0);
  const long c0 = std::max<long>(col0, 0);
  const long r1 = std::min<long>(row0 + rows, long(height));
  const long c1 = std::min<long>(col0 + cols, long(width));
  return {r0, c0, std::max<long>(r1 - r0, 0), std::max<long>(c1 - c0, 0)};
}

Image max_normalize(const Image& img) {
  Image out = img.cwiseMax(0.0);
  const double m = out.size() == 0 ? 0.0 : out.maxCoeff();
  if (m > 0.0) out /= m;
  return out;
}

std::vector<Component> label_components(const Mask& mask, const Image& values) {
  const int rows = int(mask.rows());
  const int cols = int(mask.cols());
  const bool have_values = values.rows() == mask.rows() && values.cols() == mask.cols();
  Eigen::MatrixXi label = Eigen::MatrixXi::Constant(rows, cols, -1);
  std::vector<Component> out;
  std::vector<std::pair<int, int>> stack;

  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      if (!mask(r, c) || label(r, c) >= 0) continue;
      const int id = int(out.size());
      Component comp;
      comp.peak = -std::numeric_limits<double>::infinity();
      double sum_r = 0.0;
      double sum_c = 0.0;
      stack.assign(1, {r, c});
      label(r, c) = id;
      while (!stack.empty()) {
        auto [pr, pc] = stack.back();
        stack.pop_back();
        comp.members.emplace_back(pr, pc);
        sum_r += pr;
        sum_c += pc;
        if (have_values) comp.peak = std::max(comp.peak, values(pr, pc));
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = pr + dr;
            const int nc = pc + dc;
            if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
            if (!mask(nr, nc) || label(nr, nc) >= 0) continue;
            label(nr, nc) = id;
            stack.emplace_back(nr, nc);
          }
        }
      }
      std::sort(comp.members.begin(), comp.members.end(),
                [](const auto& x, const auto& y) {
                  return x.second != y.second ? x.second < y.second : x.first < y.first;
                });
      comp.pixels = comp.members.size();
      comp.row = sum_r / double(comp.pixels);
      comp.col = sum_c / double(comp.pixels);
      if (!have_values) comp.peak = 0.0;
      out.push_back(std::move(comp));
    }
  }
  return out;
}

}  // namespace sttd
