#pragma once

#include "sttd/tensor.hpp"

#include <string_view>
#include <vector>

namespace sttd {

/// How a singular value s is mapped by the Laplace shrinkage.
enum class SvtRule {
  /// argmin over sigma >= 0 of (1 - exp(-sigma / eps)) + (eta / 2)(sigma - s)^2
  Exact,
  /// max(s - exp(-s / eps) / (eta * eps), 0), the gradient taken at s
  Linearized,
  /// max(s - exp(-p / eps) / (eta * eps), 0) where p is the matching singular
  /// value of the previous iterate; only meaningful inside the solver
  Reweighted,
};

[[nodiscard]] std::string_view to_string(SvtRule r);
[[nodiscard]] SvtRule parse_svt_rule(std::string_view s);

/// Parameters of the Laplace-weighted singular value thresholding step.
struct SvtParams {
  double eta = 1.0;  ///< quadratic penalty; the solver passes its current mu
  double eps = 0.01; ///< Laplace scale
  SvtRule rule = SvtRule::Exact;

  void validate() const;
};

/// Shrinks one singular value according to p.rule.
[[nodiscard]] double scalar_threshold(double s, const SvtParams& p);

/// Global minimizer of (1 - exp(-sigma / eps)) + (eta / 2)(sigma - s)^2 over
/// sigma >= 0. The stationarity function is convex, so there are at most two
/// stationary points; the larger one is compared against sigma = 0.
[[nodiscard]] double laplace_prox(double s, double eta, double eps);

/// Proximal step for the Laplace tensor surrogate. Transforms q along mode 3,
/// shrinks the singular values of slices 0 .. n3/2 with scalar_threshold,
/// fills the remaining slices by conjugate symmetry and transforms back.
[[nodiscard]] Tensor3 laplace_svt(const Tensor3& q, const SvtParams& p);

/// Tensor singular value soft-thresholding (prox of the tensor nuclear norm):
/// every Fourier-domain singular value becomes max(s - tau, 0).
[[nodiscard]] Tensor3 tnn_svt(const Tensor3& q, double tau);

/// Laplace shrinkage with the gradient taken at previous singular values:
/// the i-th value of Fourier slice k becomes
/// max(s - exp(-prev[k](i) / eps) / (eta * eps), 0). Missing entries of prev
/// count as zero, which gives the largest weight 1 / eps.
[[nodiscard]] Tensor3 reweighted_svt(const Tensor3& q, const std::vector<Eigen::VectorXd>& prev,
                                     double eta, double eps);

}  // namespace sttd
