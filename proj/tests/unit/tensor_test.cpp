#include "oracles.hpp"

#include "sttd/error.hpp"
#include "sttd/tensor.hpp"

#include <gtest/gtest.h>

using namespace sttd;

TEST(Tensor, ColumnMajorLayout) {
  Tensor3 t(2, 3, 4);
  t(1, 2, 3) = 7.0;
  EXPECT_EQ(t[1 + 2 * (2 + 3 * 3)], 7.0);
  EXPECT_EQ(t.slice(3)(1, 2), 7.0);
}

TEST(Tensor, ArithmeticRequiresMatchingDims) {
  Tensor3 a(2, 2, 2, 1.0);
  Tensor3 b(2, 2, 3, 1.0);
  EXPECT_THROW(a += b, DimensionMismatch);
  EXPECT_THROW((void)inner_product(a, b), DimensionMismatch);
}

TEST(Tensor, NormsAndInnerProduct) {
  Tensor3 a(2, 1, 2);
  a[0] = 3.0;
  a[3] = -4.0;
  EXPECT_DOUBLE_EQ(frobenius_norm(a), 5.0);
  EXPECT_DOUBLE_EQ(squared_frobenius_norm(a), 25.0);
  EXPECT_DOUBLE_EQ(max_abs(a), 4.0);
  EXPECT_DOUBLE_EQ(inner_product(a, a), 25.0);
}

TEST(Tensor, FftMode3MatchesDirectDft) {
  Rng rng(11);
  for (std::size_t n3 : {1u, 2u, 3u, 4u, 5u, 8u}) {
    const Dims d{3, 4, n3};
    const Tensor3 x = oracle::random_tensor(d, rng);
    const ComplexTensor3 f = fft_mode3(x);
    const auto ref = oracle::dft_mode3(x);
    for (std::size_t k = 0; k < n3; ++k) {
      EXPECT_LT((Eigen::MatrixXcd(f.slice(k)) - ref[k]).norm(), 1e-12 * (1.0 + ref[k].norm())) << "n3=" << n3;
    }
    EXPECT_LT(oracle::rel_error(ifft_mode3(f), x), 1e-14);
  }
}

TEST(Tensor, IfftRejectsAsymmetricSpectrum) {
  ComplexTensor3 f(2, 2, 3);
  f(0, 0, 1) = Complex(1.0, 0.0);  // no conjugate partner in slice 2
  EXPECT_THROW((void)ifft_mode3(f), SymmetryViolation);
}

TEST(Tensor, TnnMatchesDenseOracle) {
  Rng rng(5);
  const Tensor3 x = oracle::random_tensor({5, 4, 3}, rng);
  double expected = 0.0;
  for (const auto& s : oracle::fourier_singular_values(x)) expected += s.sum();
  EXPECT_NEAR(tnn(x), expected / 3.0, 1e-10);
}

TEST(Tensor, LaplaceNormSingleValue) {
  Tensor3 x(1, 1, 1);
  x[0] = 1.0;
  EXPECT_NEAR(laplace_norm(x, 1.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_THROW((void)laplace_norm(x, 0.0), InvalidArgument);
}

TEST(Tensor, LaplaceNormMonotoneUnderScaling) {
  Rng rng(8);
  const Tensor3 x = oracle::random_tensor({4, 4, 3}, rng);
  for (double alpha : {1.0, 1.5, 3.0, 10.0}) {
    EXPECT_GE(laplace_norm(alpha * x, 0.5) + 1e-12, laplace_norm(x, 0.5));
  }
}

TEST(Tensor, UnfoldFollowsKoldaOrdering) {
  Rng rng(2);
  const Dims d{3, 4, 2};
  const Tensor3 x = oracle::random_tensor(d, rng);
  const Eigen::MatrixXd m1 = unfold(x, 1);
  const Eigen::MatrixXd m2 = unfold(x, 2);
  const Eigen::MatrixXd m3 = unfold(x, 3);
  ASSERT_EQ(m1.rows(), 3);
  ASSERT_EQ(m1.cols(), 8);
  for (std::size_t k = 0; k < d.n3; ++k)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t i = 0; i < d.n1; ++i) {
        EXPECT_EQ(m1(i, j + d.n2 * k), x(i, j, k));
        EXPECT_EQ(m2(j, i + d.n1 * k), x(i, j, k));
        EXPECT_EQ(m3(k, i + d.n1 * j), x(i, j, k));
      }
  for (int mode = 1; mode <= 3; ++mode) EXPECT_EQ(fold(unfold(x, mode), mode, d), x);
  EXPECT_THROW((void)unfold(x, 4), InvalidArgument);
}
