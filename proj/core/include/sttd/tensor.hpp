#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sttd {

using Complex = std::complex<double>;

/// Dimensions of a 3-D array: rows (height) x cols (width) x depth (frames).
struct Dims {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;

  [[nodiscard]] std::size_t size() const { return n1 * n2 * n3; }
  [[nodiscard]] std::size_t slice_size() const { return n1 * n2; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Dense 3-D array stored column-major: element (i, j, k) lives at
/// i + n1 * (j + n2 * k), so every frontal slice is a contiguous
/// column-major n1 x n2 matrix.
template <typename Scalar>
class BasicTensor3 {
 public:
  using value_type = Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using SliceMap = Eigen::Map<Matrix>;
  using ConstSliceMap = Eigen::Map<const Matrix>;

  BasicTensor3() = default;
  explicit BasicTensor3(Dims dims, Scalar fill = Scalar{});
  BasicTensor3(std::size_t n1, std::size_t n2, std::size_t n3, Scalar fill = Scalar{})
      : BasicTensor3(Dims{n1, n2, n3}, fill) {}
  BasicTensor3(Dims dims, std::vector<Scalar> data);

  [[nodiscard]] const Dims& dims() const { return dims_; }
  [[nodiscard]] std::size_t n1() const { return dims_.n1; }
  [[nodiscard]] std::size_t n2() const { return dims_.n2; }
  [[nodiscard]] std::size_t n3() const { return dims_.n3; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims_.n1 * (j + dims_.n2 * k);
  }
  Scalar& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[index(i, j, k)]; }
  const Scalar& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[index(i, j, k)];
  }
  Scalar& operator[](std::size_t n) { return data_[n]; }
  const Scalar& operator[](std::size_t n) const { return data_[n]; }

  [[nodiscard]] std::span<Scalar> data() { return data_; }
  [[nodiscard]] std::span<const Scalar> data() const { return data_; }
  [[nodiscard]] const std::vector<Scalar>& values() const { return data_; }

  /// Frontal slice k as an n1 x n2 matrix view.
  SliceMap slice(std::size_t k) {
    return SliceMap(data_.data() + k * dims_.slice_size(), Eigen::Index(dims_.n1),
                    Eigen::Index(dims_.n2));
  }
  ConstSliceMap slice(std::size_t k) const {
    return ConstSliceMap(data_.data() + k * dims_.slice_size(), Eigen::Index(dims_.n1),
                         Eigen::Index(dims_.n2));
  }

  BasicTensor3& operator+=(const BasicTensor3& other);
  BasicTensor3& operator-=(const BasicTensor3& other);
  BasicTensor3& operator*=(Scalar s);

  friend bool operator==(const BasicTensor3&, const BasicTensor3&) = default;

 private:
  Dims dims_{};
  std::vector<Scalar> data_;
};

using Tensor3 = BasicTensor3<double>;
using ComplexTensor3 = BasicTensor3<Complex>;

extern template class BasicTensor3<double>;
extern template class BasicTensor3<Complex>;

Tensor3 operator+(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a, const Tensor3& b);
Tensor3 operator*(double s, Tensor3 a);

/// Throws DimensionMismatch unless a and b have identical dims.
void require_same_dims(const Dims& a, const Dims& b, const char* what);

[[nodiscard]] double frobenius_norm(const Tensor3& x);
[[nodiscard]] double squared_frobenius_norm(const Tensor3& x);
[[nodiscard]] double max_abs(const Tensor3& x);
[[nodiscard]] double inner_product(const Tensor3& a, const Tensor3& b);
[[nodiscard]] bool all_finite(const Tensor3& x);

/// Length-n3 DFT along the third index of every tube (i, j, :). Forward
/// transform is unnormalized; ifft_mode3 carries the 1/n3 factor.
[[nodiscard]] ComplexTensor3 fft_mode3(const Tensor3& x);

/// Inverse of fft_mode3. The imaginary part is discarded only when
/// max|im| <= 1e-9 * max(1, max|re|); otherwise SymmetryViolation.
[[nodiscard]] Tensor3 ifft_mode3(const ComplexTensor3& x);

/// Tensor nuclear norm: (1/n3) * sum_k ||Xbar_k||_* over Fourier-domain slices.
[[nodiscard]] double tnn(const Tensor3& x);

/// Laplace surrogate: sum_k sum_i (1 - exp(-sigma_i(Xbar_k) / eps)).
/// Unlike tnn there is no 1/n3 prefactor.
[[nodiscard]] double laplace_norm(const Tensor3& x, double eps);

/// Singular values of every Fourier-domain frontal slice, slice-major.
[[nodiscard]] std::vector<Eigen::VectorXd> fourier_singular_values(const Tensor3& x);

/// Mode-k matricization (mode in {1, 2, 3}) with Kolda-Bader column order:
///   mode 1: n1 x (n2 n3), column j + n2 k
///   mode 2: n2 x (n1 n3), column i + n1 k
///   mode 3: n3 x (n1 n2), column i + n1 j
[[nodiscard]] Eigen::MatrixXd unfold(const Tensor3& x, int mode);

/// Inverse of unfold for the given target dims.
[[nodiscard]] Tensor3 fold(const Eigen::MatrixXd& m, int mode, Dims dims);

}  // namespace sttd
