#include "sttd/asttv.hpp"

#include "sttd/error.hpp"

#include <cmath>
#include <numbers>

namespace sttd {

namespace {

enum class Axis { H, V, Z };

// Offset of the circular successor (+1) or predecessor (-1) along an axis.
template <int Step>
Tensor3 shifted_difference(const Tensor3& x, Axis axis) {
  const Dims d = x.dims();
  Tensor3 out(d);
  for (std::size_t k = 0; k < d.n3; ++k) {
    for (std::size_t j = 0; j < d.n2; ++j) {
      for (std::size_t i = 0; i < d.n1; ++i) {
        std::size_t ii = i, jj = j, kk = k;
        switch (axis) {
          case Axis::H: ii = (i + d.n1 + Step) % d.n1; break;
          case Axis::V: jj = (j + d.n2 + Step) % d.n2; break;
          case Axis::Z: kk = (k + d.n3 + Step) % d.n3; break;
        }
        // forward: x(n+1) - x(n); adjoint: y(n-1) - y(n)
        out(i, j, k) = x(ii, jj, kk) - x(i, j, k);
      }
    }
  }
  return out;
}

double l1(const Tensor3& x) {
  double s = 0.0;
  for (double v : x.data()) s += std::abs(v);
  return s;
}

}  // namespace

Tensor3 diff_h(const Tensor3& x) { return shifted_difference<+1>(x, Axis::H); }
Tensor3 diff_v(const Tensor3& x) { return shifted_difference<+1>(x, Axis::V); }
Tensor3 diff_z(const Tensor3& x) { return shifted_difference<+1>(x, Axis::Z); }

Tensor3 diff_h_adj(const Tensor3& y) { return shifted_difference<-1>(y, Axis::H); }
Tensor3 diff_v_adj(const Tensor3& y) { return shifted_difference<-1>(y, Axis::V); }
Tensor3 diff_z_adj(const Tensor3& y) { return shifted_difference<-1>(y, Axis::Z); }

double asttv_norm(const Tensor3& x, double delta) {
  if (!(delta >= 0.0)) throw InvalidArgument("asttv_norm: delta must be nonnegative");
  return l1(diff_h(x)) + l1(diff_v(x)) + delta * l1(diff_z(x));
}

DiffSpectra::DiffSpectra(Dims dims, bool include_differences) : denominator_(dims, 2.0) {
  if (!include_differences) return;
  // |F(D)|^2 at frequency p of a length-n circular forward difference is
  // |exp(2 pi i p / n) - 1|^2 = 2 - 2 cos(2 pi p / n).
  auto transfer = [](std::size_t p, std::size_t n) {
    return 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * double(p) / double(n));
  };
  for (std::size_t k = 0; k < dims.n3; ++k) {
    const double tz = transfer(k, dims.n3);
    for (std::size_t j = 0; j < dims.n2; ++j) {
      const double tv = transfer(j, dims.n2);
      for (std::size_t i = 0; i < dims.n1; ++i) {
        denominator_(i, j, k) = 2.0 + transfer(i, dims.n1) + tv + tz;
      }
    }
  }
}

BackgroundSolver::BackgroundSolver(std::shared_ptr<const DiffSpectra> spectra)
    : spectra_(std::move(spectra)),
      plan_(spectra_->dims(), FftPlan::Kind::Volume3),
      work_(spectra_->dims()) {}

Tensor3 BackgroundSolver::solve(const Tensor3& rhs) {
  require_same_dims(rhs.dims(), spectra_->dims(), "solve_b");
  plan_.forward(rhs, work_);
  const auto den = spectra_->denominator().data();
  auto w = work_.data();
  for (std::size_t n = 0; n < w.size(); ++n) w[n] /= den[n];
  plan_.inverse(work_, work_);
  Tensor3 out(rhs.dims());
  auto dst = out.data();
  // The denominator is real and symmetric, so the result is real up to round-off.
  for (std::size_t n = 0; n < dst.size(); ++n) dst[n] = w[n].real();
  return out;
}

Tensor3 solve_b(const Tensor3& rhs, const DiffSpectra& spectra) {
  BackgroundSolver solver(std::make_shared<const DiffSpectra>(spectra));
  return solver.solve(rhs);
}

Tensor3 apply_background_operator(const Tensor3& x) {
  Tensor3 out = 2.0 * x;
  out += diff_h_adj(diff_h(x));
  out += diff_v_adj(diff_v(x));
  out += diff_z_adj(diff_z(x));
  return out;
}

}  // namespace sttd
