#pragma once

#include "sttd/asttv.hpp"
#include "sttd/tensor.hpp"
#include "sttd/tsvd.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace sttd {

/// Low-rank penalty applied to the background.
enum class Surrogate {
  Laplace,   ///< Laplace-weighted tensor nuclear norm (default)
  PlainTnn,  ///< convex tensor nuclear norm, for ablation
};

/// Total-variation regularizer on the background.
enum class TvMode {
  Asttv,  ///< spatial TV + delta-weighted temporal TV (default)
  Sttv,   ///< symmetric variant, delta forced to 1
  None,   ///< no TV term; the background update solves 2I B = rhs
};

[[nodiscard]] std::string_view to_string(Surrogate s);
[[nodiscard]] std::string_view to_string(TvMode m);
[[nodiscard]] Surrogate parse_surrogate(std::string_view s);
[[nodiscard]] TvMode parse_tv_mode(std::string_view s);

struct SolverParams {
  double lambda_tv = 0.005;
  double H = 6.0;  ///< sparsity tuning; lambda_s = H / sqrt(max(n1, n2) * L)
  double lambda3 = 100.0;
  double delta = 0.5;
  double eps = 0.01;
  double mu0 = 1e-2;
  double mu_max = 1e7;
  double rho = 1.5;
  double zeta = 1e-6;
  int max_iter = 500;
  int L = 3;
  Surrogate surrogate = Surrogate::Laplace;
  TvMode tv_mode = TvMode::Asttv;
  /// Singular value map of the Laplace shrinkage.
  SvtRule svt_rule = SvtRule::Reweighted;

  void validate() const;

  /// Target weight for a tensor of the given dims. Uses the group length L
  /// from the params, not n3, so a final shorter group is weighted the same.
  [[nodiscard]] double lambda_s(const Dims& dims) const;
  /// delta after the tv_mode override (1 for Sttv).
  [[nodiscard]] double effective_delta() const;
};

/// Complete ADMM iterate. All tensors share the data tensor's dims.
struct SolverState {
  Tensor3 B, T, N, Z;
  Tensor3 V1, V2, V3;
  Tensor3 y1, y2, y3, y4, y5;
  double mu = 0.0;
  int iter = 0;
  double residual = 0.0;

  /// Zero state for data of the given dims.
  static SolverState zeros(Dims dims, double mu0);
};

struct Decomposition {
  Tensor3 B, T, N;
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
};

/// Elementwise shrinkage sign(x) * max(|x| - tau, 0).
[[nodiscard]] inline double soft_threshold(double x, double tau) {
  const double m = (x < 0.0 ? -x : x) - tau;
  if (m <= 0.0) return 0.0;
  return x < 0.0 ? -m : m;
}

[[nodiscard]] Tensor3 soft_threshold(const Tensor3& x, double tau);

// Individual ADMM steps. Each reads the state as it is at the moment of the
// call, so the caller is responsible for the update order.

/// Z = prox of the low-rank surrogate at B - y2 / mu.
[[nodiscard]] Tensor3 update_z(const SolverState& s, const SolverParams& p);

/// Right-hand side L + theta1 + theta2 + theta3 of the background system.
[[nodiscard]] Tensor3 background_rhs(const SolverState& s, const Tensor3& D, const SolverParams& p);

/// B from the FFT-diagonalized background system; reads s.Z as the new Z.
[[nodiscard]] Tensor3 update_b(const SolverState& s, const Tensor3& D, const SolverParams& p,
                               BackgroundSolver& solver);

/// T = shrink(D - B - N + y1 / mu, lambda_s / mu).
[[nodiscard]] Tensor3 update_t(const SolverState& s, const Tensor3& D, const SolverParams& p);

struct TvSplit {
  Tensor3 V1, V2, V3;
};
[[nodiscard]] TvSplit update_v(const SolverState& s, const SolverParams& p);

/// N = (mu (D - B - T) + y1) / (mu + 2 lambda3).
[[nodiscard]] Tensor3 update_n(const SolverState& s, const Tensor3& D, const SolverParams& p);

struct Multipliers {
  Tensor3 y1, y2, y3, y4, y5;
};
[[nodiscard]] Multipliers update_multipliers(const SolverState& s, const Tensor3& D);

/// ||D - B - T - N||_F^2 / ||D||_F^2 (absolute squared norm when D = 0).
[[nodiscard]] double relative_residual(const SolverState& s, const Tensor3& D);

/// Runs one full ADMM iteration in place (Z, B, T, V, N, multipliers, mu,
/// residual).
void admm_step(SolverState& s, const Tensor3& D, const SolverParams& p, BackgroundSolver& solver);

/// Splits D into low-rank background B, sparse target T and noise N.
/// Reaching max_iter is not an error: the last iterate comes back with
/// converged = false. `spectra` may be supplied to share the cached
/// denominator across groups of one shape.
[[nodiscard]] Decomposition decompose(const Tensor3& D, const SolverParams& p,
                                      std::shared_ptr<const DiffSpectra> spectra = nullptr);

/// Spectra matching the TV mode (plain 2I when TV is switched off).
[[nodiscard]] std::shared_ptr<const DiffSpectra> make_spectra(Dims dims, const SolverParams& p);

}  // namespace sttd
