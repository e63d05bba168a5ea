#include "sttd/tensor.hpp"

#include "sttd/error.hpp"
#include "sttd/fft.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sttd {

template <typename Scalar>
BasicTensor3<Scalar>::BasicTensor3(Dims dims, Scalar fill) : dims_(dims), data_(dims.size(), fill) {}

template <typename Scalar>
BasicTensor3<Scalar>::BasicTensor3(Dims dims, std::vector<Scalar> data)
    : dims_(dims), data_(std::move(data)) {
  if (data_.size() != dims_.size()) {
    throw DimensionMismatch("tensor data length " + std::to_string(data_.size()) +
                            " does not match dims " + std::to_string(dims_.n1) + "x" +
                            std::to_string(dims_.n2) + "x" + std::to_string(dims_.n3));
  }
}

template <typename Scalar>
BasicTensor3<Scalar>& BasicTensor3<Scalar>::operator+=(const BasicTensor3& other) {
  require_same_dims(dims_, other.dims_, "operator+=");
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += other.data_[n];
  return *this;
}

template <typename Scalar>
BasicTensor3<Scalar>& BasicTensor3<Scalar>::operator-=(const BasicTensor3& other) {
  require_same_dims(dims_, other.dims_, "operator-=");
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= other.data_[n];
  return *this;
}

template <typename Scalar>
BasicTensor3<Scalar>& BasicTensor3<Scalar>::operator*=(Scalar s) {
  for (auto& v : data_) v *= s;
  return *this;
}

template class BasicTensor3<double>;
template class BasicTensor3<Complex>;

Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

void require_same_dims(const Dims& a, const Dims& b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dims " + std::to_string(a.n1) + "x" +
                            std::to_string(a.n2) + "x" + std::to_string(a.n3) + " vs " +
                            std::to_string(b.n1) + "x" + std::to_string(b.n2) + "x" +
                            std::to_string(b.n3));
  }
}

double squared_frobenius_norm(const Tensor3& x) {
  double s = 0.0;
  for (double v : x.data()) s += v * v;
  return s;
}

double frobenius_norm(const Tensor3& x) { return std::sqrt(squared_frobenius_norm(x)); }

double max_abs(const Tensor3& x) {
  double m = 0.0;
  for (double v : x.data()) m = std::max(m, std::abs(v));
  return m;
}

double inner_product(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a.dims(), b.dims(), "inner_product");
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s;
}

bool all_finite(const Tensor3& x) {
  return std::all_of(x.data().begin(), x.data().end(), [](double v) { return std::isfinite(v); });
}

ComplexTensor3 fft_mode3(const Tensor3& x) {
  if (x.empty()) return ComplexTensor3(x.dims());
  FftPlan plan(x.dims(), FftPlan::Kind::Mode3);
  return plan.forward(x);
}

Tensor3 ifft_mode3(const ComplexTensor3& x) {
  if (x.empty()) return Tensor3(x.dims());
  FftPlan plan(x.dims(), FftPlan::Kind::Mode3);
  return real_part_checked(plan.inverse(x));
}

std::vector<Eigen::VectorXd> fourier_singular_values(const Tensor3& x) {
  const ComplexTensor3 xf = fft_mode3(x);
  std::vector<Eigen::VectorXd> out(x.n3());
  for (std::size_t k = 0; k < x.n3(); ++k) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(xf.slice(k));
    out[k] = svd.singularValues();
  }
  return out;
}

double tnn(const Tensor3& x) {
  if (x.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& sv : fourier_singular_values(x)) sum += sv.sum();
  return sum / static_cast<double>(x.n3());
}

double laplace_norm(const Tensor3& x, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("laplace_norm: eps must be positive");
  double sum = 0.0;
  for (const auto& sv : fourier_singular_values(x)) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) sum += -std::expm1(-sv(i) / eps);
  }
  return sum;
}

namespace {

void check_mode(int mode) {
  if (mode < 1 || mode > 3) throw InvalidArgument("unfold: mode must be 1, 2 or 3");
}

// Row and column of element (i, j, k) in the mode-k unfolding.
std::pair<Eigen::Index, Eigen::Index> unfold_position(const Dims& d, int mode, std::size_t i,
                                                      std::size_t j, std::size_t k) {
  switch (mode) {
    case 1:
      return {Eigen::Index(i), Eigen::Index(j + d.n2 * k)};
    case 2:
      return {Eigen::Index(j), Eigen::Index(i + d.n1 * k)};
    default:
      return {Eigen::Index(k), Eigen::Index(i + d.n1 * j)};
  }
}

}  // namespace

Eigen::MatrixXd unfold(const Tensor3& x, int mode) {
  check_mode(mode);
  const Dims& d = x.dims();
  const std::size_t rows = mode == 1 ? d.n1 : mode == 2 ? d.n2 : d.n3;
  const std::size_t cols = rows == 0 ? 0 : d.size() / rows;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t k = 0; k < d.n3; ++k)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t i = 0; i < d.n1; ++i) {
        auto [r, c] = unfold_position(d, mode, i, j, k);
        m(r, c) = x(i, j, k);
      }
  return m;
}

Tensor3 fold(const Eigen::MatrixXd& m, int mode, Dims dims) {
  check_mode(mode);
  const std::size_t rows = mode == 1 ? dims.n1 : mode == 2 ? dims.n2 : dims.n3;
  if (std::size_t(m.rows()) != rows || std::size_t(m.rows() * m.cols()) != dims.size()) {
    throw DimensionMismatch("fold: matrix shape does not match target dims");
  }
  Tensor3 x(dims);
  for (std::size_t k = 0; k < dims.n3; ++k)
    for (std::size_t j = 0; j < dims.n2; ++j)
      for (std::size_t i = 0; i < dims.n1; ++i) {
        auto [r, c] = unfold_position(dims, mode, i, j, k);
        x(i, j, k) = m(r, c);
      }
  return x;
}

}  // namespace sttd
