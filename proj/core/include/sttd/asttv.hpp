#pragma once

#include "sttd/fft.hpp"
#include "sttd/tensor.hpp"

#include <memory>

namespace sttd {

// Forward differences with circular wrap on every axis:
//   h: x(i+1, j, k) - x(i, j, k)   (along rows / height)
//   v: x(i, j+1, k) - x(i, j, k)   (along columns / width)
//   z: x(i, j, k+1) - x(i, j, k)   (along frames)
// Circular boundaries make every operator diagonal in the 3-D Fourier basis.

[[nodiscard]] Tensor3 diff_h(const Tensor3& x);
[[nodiscard]] Tensor3 diff_v(const Tensor3& x);
[[nodiscard]] Tensor3 diff_z(const Tensor3& x);

// Exact adjoints: (D^T y)(n) = y(n - 1) - y(n) along the operator's axis.
[[nodiscard]] Tensor3 diff_h_adj(const Tensor3& y);
[[nodiscard]] Tensor3 diff_v_adj(const Tensor3& y);
[[nodiscard]] Tensor3 diff_z_adj(const Tensor3& y);

/// ||D_h x||_1 + ||D_v x||_1 + delta * ||D_z x||_1
[[nodiscard]] double asttv_norm(const Tensor3& x, double delta);

/// Eigenvalues of 2I + sum_i D_i^T D_i per 3-D frequency bin. Depends only
/// on the shape, immutable after construction, safe to share across threads.
class DiffSpectra {
 public:
  /// include_differences = false gives the plain 2I operator used when the
  /// total-variation term is switched off.
  explicit DiffSpectra(Dims dims, bool include_differences = true);

  [[nodiscard]] const Dims& dims() const { return denominator_.dims(); }
  [[nodiscard]] const Tensor3& denominator() const { return denominator_; }

 private:
  Tensor3 denominator_;
};

/// Solves (2I + Delta) B = rhs by 3-D FFT division.
class BackgroundSolver {
 public:
  explicit BackgroundSolver(std::shared_ptr<const DiffSpectra> spectra);

  [[nodiscard]] const DiffSpectra& spectra() const { return *spectra_; }
  [[nodiscard]] Tensor3 solve(const Tensor3& rhs);

 private:
  std::shared_ptr<const DiffSpectra> spectra_;
  FftPlan plan_;
  ComplexTensor3 work_;
};

/// One-shot convenience wrapper over BackgroundSolver.
[[nodiscard]] Tensor3 solve_b(const Tensor3& rhs, const DiffSpectra& spectra);

/// Applies (2I + D_h^T D_h + D_v^T D_v + D_z^T D_z) directly by stencils.
[[nodiscard]] Tensor3 apply_background_operator(const Tensor3& x);

}  // namespace sttd
