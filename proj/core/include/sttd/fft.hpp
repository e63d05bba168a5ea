#pragma once

#include "sttd/tensor.hpp"

#include <memory>

namespace sttd {

/// Reusable FFTW plan pair for tensors of one shape. Plans are built once
/// (FFTW_ESTIMATE, so the chosen algorithm does not depend on timing) and
/// executed on buffers owned by the object. Not safe to share between
/// threads; build one per thread or per solver.
class FftPlan {
 public:
  enum class Kind {
    Mode3,    ///< independent 1-D transforms along the third index
    Volume3,  ///< full 3-D transform
  };

  FftPlan(Dims dims, Kind kind);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  [[nodiscard]] const Dims& dims() const;

  /// Unnormalized forward transform of a real tensor.
  [[nodiscard]] ComplexTensor3 forward(const Tensor3& x);
  void forward(const Tensor3& x, ComplexTensor3& out);
  /// Inverse transform including the 1/N normalization. Output stays complex.
  [[nodiscard]] ComplexTensor3 inverse(const ComplexTensor3& x);
  void inverse(const ComplexTensor3& x, ComplexTensor3& out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Real part of x after checking max|im| <= 1e-9 * max(1, max|re|).
[[nodiscard]] Tensor3 real_part_checked(const ComplexTensor3& x);

}  // namespace sttd
