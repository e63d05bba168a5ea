#include "sttd/tsvd.hpp"

#include "sttd/error.hpp"
#include "sttd/fft.hpp"
#include "sttd/parallel.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace sttd {

std::string_view to_string(SvtRule r) {
  switch (r) {
    case SvtRule::Exact:
      return "exact";
    case SvtRule::Linearized:
      return "linearized";
    default:
      return "reweighted";
  }
}

SvtRule parse_svt_rule(std::string_view s) {
  if (s == "exact") return SvtRule::Exact;
  if (s == "linearized") return SvtRule::Linearized;
  if (s == "reweighted") return SvtRule::Reweighted;
  throw InvalidArgument("unknown shrinkage rule '" + std::string(s) +
                        "' (exact|linearized|reweighted)");
}

void SvtParams::validate() const {
  if (!(eta > 0.0)) throw InvalidArgument("SvtParams: eta must be positive");
  if (!(eps > 0.0)) throw InvalidArgument("SvtParams: eps must be positive");
}

double laplace_prox(double s, double eta, double eps) {
  if (!(s > 0.0)) return 0.0;
  const double c = 1.0 / (eta * eps);
  // h = g' / eta; convex in x with h(s) > 0.
  auto h = [&](double x) { return x - s + c * std::exp(-x / eps); };
  auto g = [&](double x) { return -std::expm1(-x / eps) + 0.5 * eta * (x - s) * (x - s); };

  double lo = 0.0;
  const bool zero_is_stationary_candidate = s <= c;  // h(0) >= 0
  if (zero_is_stationary_candidate) {
    const double xmin = c > eps ? eps * std::log(c / eps) : 0.0;
    if (xmin >= s || h(xmin) >= 0.0) return 0.0;
    lo = xmin;
  }
  double hi = s;
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * s; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = hi;
  if (!zero_is_stationary_candidate) return root;
  return g(root) < g(0.0) ? root : 0.0;
}

double scalar_threshold(double s, const SvtParams& p) {
  if (p.rule == SvtRule::Exact) return laplace_prox(s, p.eta, p.eps);
  if (p.rule == SvtRule::Reweighted) {
    throw InvalidArgument("reweighted shrinkage needs previous singular values (use reweighted_svt)");
  }
  return std::max(s - std::exp(-s / p.eps) / (p.eta * p.eps), 0.0);
}

namespace {

// (slice, index, singular value) -> shrunk value
using ShrinkFn = std::function<double(std::size_t, Eigen::Index, double)>;

// Self-conjugate slices (DC, and Nyquist for even n3) must be real.
Eigen::MatrixXd real_slice(const ComplexTensor3::ConstSliceMap& slice, std::size_t k) {
  const double max_re = slice.real().cwiseAbs().maxCoeff();
  const double max_im = slice.imag().cwiseAbs().maxCoeff();
  if (!(max_im <= 1e-9 * std::max(1.0, max_re))) {
    std::ostringstream os;
    os << "Fourier slice " << k << " should be real but has imaginary part " << max_im;
    throw SymmetryViolation(os.str());
  }
  return slice.real();
}

template <typename Matrix>
Matrix shrink_matrix(const Matrix& m, std::size_t k, const ShrinkFn& shrink) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = shrink(k, i, s(i));
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

Tensor3 spectral_shrink(const Tensor3& q, const ShrinkFn& shrink) {
  if (q.empty()) return Tensor3(q.dims());
  const Dims d = q.dims();
  FftPlan plan(d, FftPlan::Kind::Mode3);
  const ComplexTensor3 qf = plan.forward(q);
  ComplexTensor3 zf(d);

  const std::size_t n3 = d.n3;
  const std::size_t half = n3 / 2 + 1;  // ceil((n3 + 1) / 2) slices carry the information

  parallel_for(half, [&](std::size_t k) {
    const bool self_conjugate = k == 0 || 2 * k == n3;
    if (self_conjugate) {
      zf.slice(k) = shrink_matrix<Eigen::MatrixXd>(real_slice(qf.slice(k), k), k, shrink)
                        .template cast<Complex>();
    } else {
      zf.slice(k) = shrink_matrix<Eigen::MatrixXcd>(qf.slice(k), k, shrink);
    }
  });
  for (std::size_t k = half; k < n3; ++k) zf.slice(k) = zf.slice(n3 - k).conjugate();

  ComplexTensor3 z = plan.inverse(zf);
  return real_part_checked(z);
}

}  // namespace

Tensor3 laplace_svt(const Tensor3& q, const SvtParams& p) {
  p.validate();
  return spectral_shrink(q, [&p](std::size_t, Eigen::Index, double s) { return scalar_threshold(s, p); });
}

Tensor3 tnn_svt(const Tensor3& q, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("tnn_svt: tau must be nonnegative");
  return spectral_shrink(q, [tau](std::size_t, Eigen::Index, double s) { return std::max(s - tau, 0.0); });
}

Tensor3 reweighted_svt(const Tensor3& q, const std::vector<Eigen::VectorXd>& prev, double eta,
                       double eps) {
  SvtParams{eta, eps, SvtRule::Reweighted}.validate();
  return spectral_shrink(q, [&](std::size_t k, Eigen::Index i, double s) {
    const double sp = k < prev.size() && i < prev[k].size() ? prev[k](i) : 0.0;
    return std::max(s - std::exp(-sp / eps) / (eta * eps), 0.0);
  });
}

}  // namespace sttd
