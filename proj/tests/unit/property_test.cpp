// Randomized invariants over many shapes and seeds.

#include "oracles.hpp"

#include "sttd/asttv.hpp"
#include "sttd/solver.hpp"
#include "sttd/tsvd.hpp"

#include <gtest/gtest.h>

using namespace sttd;

namespace {

Dims random_dims(Rng& rng) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + std::size_t(rng.uniform() * double(hi - lo + 1)); };
  return {pick(1, 7), pick(1, 7), pick(1, 6)};
}

}  // namespace

TEST(Property, SvtOutputsAreRealAndShrinkTheNorm) {
  Rng rng(1001);
  for (int trial = 0; trial < 60; ++trial) {
    const Dims d = random_dims(rng);
    const Tensor3 q = oracle::random_tensor(d, rng);
    const double eta = 0.1 + 10 * rng.uniform();
    const double eps = 0.01 + rng.uniform();
    for (SvtRule rule : {SvtRule::Exact, SvtRule::Linearized}) {
      const Tensor3 z = laplace_svt(q, {eta, eps, rule});
      ASSERT_TRUE(all_finite(z));
      EXPECT_LE(frobenius_norm(z), frobenius_norm(q) * (1 + 1e-12));
    }
    const Tensor3 t = tnn_svt(q, rng.uniform());
    EXPECT_LE(tnn(t), tnn(q) + 1e-12);
  }
}

TEST(Property, ExactProxNeverLosesToLinearized) {
  Rng rng(1002);
  for (int trial = 0; trial < 2000; ++trial) {
    const double s = 3 * rng.uniform();
    const double eta = 0.1 + 20 * rng.uniform();
    const double eps = 0.01 + rng.uniform();
    auto g = [&](double x) { return 1 - std::exp(-x / eps) + 0.5 * eta * (x - s) * (x - s); };
    const double exact = laplace_prox(s, eta, eps);
    const double lin = scalar_threshold(s, {eta, eps, SvtRule::Linearized});
    EXPECT_LE(g(exact), g(lin) + 1e-12);
    EXPECT_LE(g(exact), g(0.0) + 1e-12);
    EXPECT_LE(g(exact), g(s) + 1e-12);
    EXPECT_GE(exact, 0.0);
    EXPECT_LE(exact, s);
  }
}

TEST(Property, TnnIsUnitarilyInvariantAndHomogeneous) {
  Rng rng(1003);
  for (int trial = 0; trial < 20; ++trial) {
    const Dims d = random_dims(rng);
    const Tensor3 x = oracle::random_tensor(d, rng);
    EXPECT_NEAR(tnn(2.5 * x), 2.5 * tnn(x), 1e-10 * (1 + tnn(x)));
    // Permuting frames cyclically keeps the Fourier magnitudes.
    Tensor3 rolled(d);
    for (std::size_t k = 0; k < d.n3; ++k) rolled.slice((k + 1) % d.n3) = x.slice(k);
    EXPECT_NEAR(tnn(rolled), tnn(x), 1e-10 * (1 + tnn(x)));
  }
}

TEST(Property, DifferenceOperatorsAnnihilateConstants) {
  Rng rng(1004);
  for (int trial = 0; trial < 10; ++trial) {
    const Dims d = random_dims(rng);
    const Tensor3 c(d, rng.normal());
    EXPECT_EQ(max_abs(diff_h(c)), 0.0);
    EXPECT_EQ(max_abs(diff_v(c)), 0.0);
    EXPECT_EQ(max_abs(diff_z(c)), 0.0);
    EXPECT_EQ(asttv_norm(c, 0.5), 0.0);
  }
}

TEST(Property, DecompositionAddsUpAtConvergence) {
  Rng rng(1005);
  for (int trial = 0; trial < 6; ++trial) {
    Dims d = random_dims(rng);
    d.n3 = 3;
    Tensor3 D = oracle::random_tensor(d, rng, 0.05);
    for (std::size_t n = 0; n < D.size(); ++n) D[n] += 0.4;
    const Decomposition r = decompose(D, SolverParams{});
    ASSERT_TRUE(r.converged);
    EXPECT_LE(squared_frobenius_norm(D - r.B - r.T - r.N), 1e-6 * squared_frobenius_norm(D) * (1 + 1e-9));
  }
}

TEST(Property, ScalingDataScalesPlainTnnDecomposition) {
  // Every term is positively homogeneous there, so D -> cD maps the iterates
  // to c times themselves when mu and lambda3 are scaled by 1/c.
  Rng rng(1006);
  const Tensor3 D = oracle::random_tensor({6, 5, 3}, rng);
  SolverParams p;
  p.surrogate = Surrogate::PlainTnn;
  p.tv_mode = TvMode::None;
  p.max_iter = 30;
  const Decomposition a = decompose(D, p);
  SolverParams q = p;
  q.mu0 = p.mu0 / 4.0;
  q.mu_max = p.mu_max / 4.0;
  q.lambda3 = p.lambda3 / 4.0;
  const Decomposition b = decompose(4.0 * D, q);
  EXPECT_LT(oracle::rel_error(b.B, 4.0 * a.B), 1e-9);
  EXPECT_LT(oracle::rel_error(b.T, 4.0 * a.T), 1e-9);
}
