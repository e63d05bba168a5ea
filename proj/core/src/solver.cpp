#include "sttd/solver.hpp"

#include "sttd/error.hpp"
#include "sttd/tsvd.hpp"

#include <algorithm>
#include <cmath>

namespace sttd {

std::string_view to_string(Surrogate s) {
  return s == Surrogate::Laplace ? "laplace" : "plain_tnn";
}

std::string_view to_string(TvMode m) {
  switch (m) {
    case TvMode::Asttv: return "asttv";
    case TvMode::Sttv: return "sttv";
    case TvMode::None: return "none";
  }
  return "asttv";
}

Surrogate parse_surrogate(std::string_view s) {
  if (s == "laplace") return Surrogate::Laplace;
  if (s == "plain_tnn" || s == "tnn") return Surrogate::PlainTnn;
  throw InvalidArgument("unknown surrogate '" + std::string(s) + "' (laplace|plain_tnn)");
}

TvMode parse_tv_mode(std::string_view s) {
  if (s == "asttv") return TvMode::Asttv;
  if (s == "sttv") return TvMode::Sttv;
  if (s == "none") return TvMode::None;
  throw InvalidArgument("unknown tv mode '" + std::string(s) + "' (asttv|sttv|none)");
}

void SolverParams::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw InvalidArgument(std::string("SolverParams: ") + msg);
  };
  require(lambda_tv > 0.0, "lambda_tv must be positive");
  require(H > 0.0, "H must be positive");
  require(lambda3 > 0.0, "lambda3 must be positive");
  require(delta >= 0.0 && delta <= 1.0, "delta must lie in [0, 1]");
  require(eps > 0.0, "eps must be positive");
  require(mu0 > 0.0, "mu0 must be positive");
  require(mu_max >= mu0, "mu_max must be >= mu0");
  require(rho > 1.0, "rho must be > 1");
  require(zeta > 0.0, "zeta must be positive");
  require(max_iter >= 1, "max_iter must be >= 1");
  require(L >= 2, "L must be >= 2");
}

double SolverParams::lambda_s(const Dims& dims) const {
  return H / std::sqrt(double(std::max(dims.n1, dims.n2)) * double(L));
}

double SolverParams::effective_delta() const { return tv_mode == TvMode::Sttv ? 1.0 : delta; }

SolverState SolverState::zeros(Dims dims, double mu0) {
  SolverState s;
  for (Tensor3* t : {&s.B, &s.T, &s.N, &s.Z, &s.V1, &s.V2, &s.V3, &s.y1, &s.y2, &s.y3, &s.y4,
                     &s.y5}) {
    *t = Tensor3(dims);
  }
  s.mu = mu0;
  return s;
}

Tensor3 soft_threshold(const Tensor3& x, double tau) {
  Tensor3 out(x.dims());
  auto src = x.data();
  auto dst = out.data();
  for (std::size_t n = 0; n < src.size(); ++n) dst[n] = soft_threshold(src[n], tau);
  return out;
}

namespace {

// a + b / mu, elementwise
Tensor3 plus_scaled(const Tensor3& a, const Tensor3& b, double inv_mu) {
  Tensor3 out(a.dims());
  auto pa = a.data();
  auto pb = b.data();
  auto po = out.data();
  for (std::size_t n = 0; n < po.size(); ++n) po[n] = pa[n] + pb[n] * inv_mu;
  return out;
}

}  // namespace

Tensor3 update_z(const SolverState& s, const SolverParams& p) {
  const Tensor3 q = plus_scaled(s.B, s.y2, -1.0 / s.mu);
  if (p.surrogate == Surrogate::PlainTnn) return tnn_svt(q, 1.0 / s.mu);
  if (p.svt_rule == SvtRule::Reweighted) {
    return reweighted_svt(q, fourier_singular_values(s.Z), s.mu, p.eps);
  }
  return laplace_svt(q, SvtParams{s.mu, p.eps, p.svt_rule});
}

Tensor3 background_rhs(const SolverState& s, const Tensor3& D, const SolverParams& p) {
  const double inv_mu = 1.0 / s.mu;
  Tensor3 rhs(D.dims());
  {
    auto d = D.data();
    auto t = s.T.data();
    auto nn = s.N.data();
    auto y1 = s.y1.data();
    auto z = s.Z.data();
    auto y2 = s.y2.data();
    auto r = rhs.data();
    for (std::size_t n = 0; n < r.size(); ++n) {
      r[n] = d[n] - t[n] - nn[n] + y1[n] * inv_mu + z[n] + y2[n] * inv_mu;
    }
  }
  if (p.tv_mode == TvMode::None) return rhs;
  rhs += diff_h_adj(plus_scaled(s.V1, s.y3, inv_mu));
  rhs += diff_v_adj(plus_scaled(s.V2, s.y4, inv_mu));
  rhs += diff_z_adj(plus_scaled(s.V3, s.y5, inv_mu));
  return rhs;
}

Tensor3 update_b(const SolverState& s, const Tensor3& D, const SolverParams& p,
                 BackgroundSolver& solver) {
  return solver.solve(background_rhs(s, D, p));
}

Tensor3 update_t(const SolverState& s, const Tensor3& D, const SolverParams& p) {
  const double inv_mu = 1.0 / s.mu;
  const double tau = p.lambda_s(D.dims()) * inv_mu;
  Tensor3 out(D.dims());
  auto d = D.data();
  auto b = s.B.data();
  auto nn = s.N.data();
  auto y1 = s.y1.data();
  auto o = out.data();
  for (std::size_t n = 0; n < o.size(); ++n) {
    o[n] = soft_threshold(d[n] - b[n] - nn[n] + y1[n] * inv_mu, tau);
  }
  return out;
}

TvSplit update_v(const SolverState& s, const SolverParams& p) {
  const double inv_mu = 1.0 / s.mu;
  const double tau = p.lambda_tv * inv_mu;
  return TvSplit{
      soft_threshold(plus_scaled(diff_h(s.B), s.y3, -inv_mu), tau),
      soft_threshold(plus_scaled(diff_v(s.B), s.y4, -inv_mu), tau),
      soft_threshold(plus_scaled(diff_z(s.B), s.y5, -inv_mu), p.effective_delta() * tau),
  };
}

Tensor3 update_n(const SolverState& s, const Tensor3& D, const SolverParams& p) {
  const double denom = s.mu + 2.0 * p.lambda3;
  Tensor3 out(D.dims());
  auto d = D.data();
  auto b = s.B.data();
  auto t = s.T.data();
  auto y1 = s.y1.data();
  auto o = out.data();
  for (std::size_t n = 0; n < o.size(); ++n) {
    o[n] = (s.mu * (d[n] - b[n] - t[n]) + y1[n]) / denom;
  }
  return out;
}

Multipliers update_multipliers(const SolverState& s, const Tensor3& D) {
  const double mu = s.mu;
  Multipliers m{s.y1, s.y2, s.y3, s.y4, s.y5};
  {
    auto d = D.data();
    auto b = s.B.data();
    auto t = s.T.data();
    auto nn = s.N.data();
    auto z = s.Z.data();
    auto y1 = m.y1.data();
    auto y2 = m.y2.data();
    for (std::size_t n = 0; n < y1.size(); ++n) {
      y1[n] += mu * (d[n] - b[n] - t[n] - nn[n]);
      y2[n] += mu * (z[n] - b[n]);
    }
  }
  auto ascend = [mu](Tensor3& y, const Tensor3& v, const Tensor3& db) {
    auto py = y.data();
    auto pv = v.data();
    auto pd = db.data();
    for (std::size_t n = 0; n < py.size(); ++n) py[n] += mu * (pv[n] - pd[n]);
  };
  ascend(m.y3, s.V1, diff_h(s.B));
  ascend(m.y4, s.V2, diff_v(s.B));
  ascend(m.y5, s.V3, diff_z(s.B));
  return m;
}

double relative_residual(const SolverState& s, const Tensor3& D) {
  double num = 0.0;
  double den = 0.0;
  auto d = D.data();
  auto b = s.B.data();
  auto t = s.T.data();
  auto nn = s.N.data();
  for (std::size_t n = 0; n < d.size(); ++n) {
    const double r = d[n] - b[n] - t[n] - nn[n];
    num += r * r;
    den += d[n] * d[n];
  }
  return den > 0.0 ? num / den : num;
}

void admm_step(SolverState& s, const Tensor3& D, const SolverParams& p, BackgroundSolver& solver) {
  s.Z = update_z(s, p);
  s.B = update_b(s, D, p, solver);
  s.T = update_t(s, D, p);
  if (p.tv_mode != TvMode::None) {
    TvSplit v = update_v(s, p);
    s.V1 = std::move(v.V1);
    s.V2 = std::move(v.V2);
    s.V3 = std::move(v.V3);
  }
  s.N = update_n(s, D, p);
  Multipliers m = update_multipliers(s, D);
  s.y1 = std::move(m.y1);
  s.y2 = std::move(m.y2);
  // Without the TV split, V and y3..y5 stay at zero.
  if (p.tv_mode != TvMode::None) {
    s.y3 = std::move(m.y3);
    s.y4 = std::move(m.y4);
    s.y5 = std::move(m.y5);
  }
  s.mu = std::min(p.rho * s.mu, p.mu_max);
  s.residual = relative_residual(s, D);
  ++s.iter;
}

std::shared_ptr<const DiffSpectra> make_spectra(Dims dims, const SolverParams& p) {
  return std::make_shared<const DiffSpectra>(dims, p.tv_mode != TvMode::None);
}

Decomposition decompose(const Tensor3& D, const SolverParams& p,
                        std::shared_ptr<const DiffSpectra> spectra) {
  p.validate();
  if (D.empty()) throw DimensionMismatch("decompose: empty data tensor");
  if (!all_finite(D)) throw InvalidArgument("decompose: data tensor has non-finite entries");
  if (!spectra) spectra = make_spectra(D.dims(), p);
  require_same_dims(D.dims(), spectra->dims(), "decompose: spectra");

  BackgroundSolver solver(std::move(spectra));
  SolverState s = SolverState::zeros(D.dims(), p.mu0);
  bool converged = false;
  while (s.iter < p.max_iter) {
    admm_step(s, D, p, solver);
    if (s.residual <= p.zeta) {
      converged = true;
      break;
    }
  }
  return Decomposition{std::move(s.B), std::move(s.T), std::move(s.N), s.iter, s.residual,
                       converged};
}

}  // namespace sttd
