#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace sttd {

/// Grayscale frame, rows = height. Intensities are on the [0, 1] scale after
/// ingestion.
using Image = Eigen::MatrixXd;
/// Binary detection mask (0 or 1), same shape as its image.
using Mask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Ordered frames of identical size.
struct FrameSequence {
  std::vector<Image> frames;
  std::string source;
  int bit_depth = 0;

  [[nodiscard]] std::size_t size() const { return frames.size(); }
  [[nodiscard]] Eigen::Index rows() const { return frames.empty() ? 0 : frames.front().rows(); }
  [[nodiscard]] Eigen::Index cols() const { return frames.empty() ? 0 : frames.front().cols(); }
  /// Throws InvalidArgument unless nonempty with uniform dimensions.
  void validate() const;
};

/// Axis-aligned pixel rectangle [row0, row0 + rows) x [col0, col0 + cols).
/// May extend past the image; see clip().
struct Box {
  long row0 = 0;
  long col0 = 0;
  long rows = 0;
  long cols = 0;

  /// a x b box centred on a (possibly fractional) centroid. The centre pixel
  /// is the rounded centroid; for even sizes the extra row/column goes after.
  static Box centered(double row, double col, long a, long b);
  [[nodiscard]] Box grown(long d) const { return {row0 - d, col0 - d, rows + 2 * d, cols + 2 * d}; }
  [[nodiscard]] Box clip(Eigen::Index height, Eigen::Index width) const;
  [[nodiscard]] bool contains(long r, long c) const {
    return r >= row0 && r < row0 + rows && c >= col0 && c < col0 + cols;
  }
  [[nodiscard]] bool empty() const { return rows <= 0 || cols <= 0; }
  friend bool operator==(const Box&, const Box&) = default;
};

/// Clamps negatives to zero and divides by the maximum, mapping onto [0, 1].
/// An image with no positive entries maps to all zeros.
[[nodiscard]] Image max_normalize(const Image& img);

/// Connected component of a mask.
struct Component {
  double row = 0.0;  ///< centroid
  double col = 0.0;
  std::size_t pixels = 0;
  double peak = 0.0;  ///< largest value of the companion image inside the component
  std::vector<std::pair<int, int>> members;
};

/// 8-connected components of `mask`, ordered by their first pixel in
/// column-major scan order. `values` supplies the peak (may be empty).
[[nodiscard]] std::vector<Component> label_components(const Mask& mask, const Image& values = {});

}  // namespace sttd
