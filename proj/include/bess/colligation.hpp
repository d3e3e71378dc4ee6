#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bess/cayley.hpp"
#include "bess/domain.hpp"
#include "bess/involution.hpp"
#include "bess/numkit.hpp"
#include "bess/pencil.hpp"
#include "bess/report.hpp"
#include "bess/rng.hpp"
#include "bess/sampling.hpp"
#include "bess/types.hpp"

namespace bess {

// Unitary colligation U = [A B; C D] on (C^{n_1+...+n_N} ⊗ X) ⊕ U, evaluated
// as the transfer function F(W) = D + C (P(W)⊗I)(I - A (P(W)⊗I))^{-1} B with
// P(W) = diag(W_1, ..., W_N).
struct Colligation {
  std::vector<Index> n;
  Index x = 0;  // dim X
  Index u = 0;  // dim U
  CMatrix U;

  Colligation() = default;
  Colligation(std::vector<Index> n_, Index x_, Index u_, CMatrix u_mat)
      : n(std::move(n_)), x(x_), u(u_), U(std::move(u_mat)) {
    if (x < 0 || u < 1) throw ShapeMismatch("Colligation: invalid dimensions");
    const Index dim = state_dim() + u;
    if (U.rows() != dim || U.cols() != dim)
      throw ShapeMismatch("Colligation: operator size mismatch");
    if (unitary_defect() > 1e-8)
      throw InvalidInput("Colligation: operator is not unitary");
  }

  Index sum_n() const {
    Index s = 0;
    for (Index nk : n) s += nk;
    return s;
  }
  Index state_dim() const { return sum_n() * x; }

  CMatrix state_block() const { return U.topLeftCorner(state_dim(), state_dim()); }
  CMatrix input_block() const { return U.topRightCorner(state_dim(), u); }
  CMatrix output_block() const { return U.bottomLeftCorner(u, state_dim()); }
  CMatrix feedthrough() const { return U.bottomRightCorner(u, u); }

  double unitary_defect() const {
    return (U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())).norm();
  }
  double selfadjoint_defect() const { return (U - U.adjoint()).norm(); }

  bool selfadjoint(double tol = 1e-8) const { return selfadjoint_defect() <= tol; }
};

namespace detail {

// P(W) ⊗ I_x as one block-diagonal matrix.
inline CMatrix state_point(const std::vector<Index>& n, Index x,
                           const MatrixPoint& w) {
  Index s = 0;
  for (Index nk : n) s += nk;
  CMatrix p = CMatrix::Zero(s * x, s * x);
  Index off = 0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    const Index nk = n[k];
    p.block(off * x, off * x, nk * x, nk * x) =
        kron(w.Z[k], CMatrix::Identity(x, x));
    off += nk;
  }
  return p;
}

}  // namespace detail

inline CMatrix transfer_eval(const Colligation& c, const MatrixPoint& w) {
  if (!w.matches(c.n)) throw ShapeMismatch("transfer_eval: point shape mismatch");
  if (c.x == 0) return c.feedthrough();
  const CMatrix px = detail::state_point(c.n, c.x, w);
  const CMatrix s =
      CMatrix::Identity(px.rows(), px.cols()) - c.state_block() * px;
  return c.feedthrough() +
         c.output_block() * px * solve(s, c.input_block(), "transfer_eval");
}

// Transfer evaluation with the scalar entries of W replaced by the d x d
// entry blocks of a commuting contraction tuple.
inline CMatrix transfer_eval_operator(const Colligation& c, const OperatorTuple& t) {
  if (t.n != c.n) throw ShapeMismatch("transfer_eval_operator: tuple shape mismatch");
  t.require_commuting();
  const Index d = t.d;
  if (c.x == 0) return kron(c.feedthrough(), CMatrix::Identity(d, d));
  const Index sd = c.state_dim();
  CMatrix px = CMatrix::Zero(sd * d, sd * d);
  Index off = 0;
  for (std::size_t k = 0; k < c.n.size(); ++k) {
    const Index nk = c.n[k];
    for (Index i = 0; i < nk; ++i)
      for (Index j = 0; j < nk; ++j) {
        const CMatrix blk = t.block(static_cast<Index>(k), i, j);
        for (Index a = 0; a < c.x; ++a)
          px.block(((off + i) * c.x + a) * d, ((off + j) * c.x + a) * d, d, d) = blk;
      }
    off += nk;
  }
  const CMatrix id = CMatrix::Identity(sd * d, sd * d);
  const CMatrix ahat = kron(c.state_block(), CMatrix::Identity(d, d));
  const CMatrix bhat = kron(c.input_block(), CMatrix::Identity(d, d));
  return kron(c.feedthrough(), CMatrix::Identity(d, d)) +
         kron(c.output_block(), CMatrix::Identity(d, d)) * px *
             solve(id - ahat * px, bhat, "transfer_eval_operator");
}

// theta_k(W) = ((I - W_k)^{-1} ⊗ I_{m_k}) phi_k(Z(W)) (I - F(W)), the disk-side
// kernel factors of a pencil function.
inline std::vector<CMatrix> theta_from_pencil(const BessFunction& f,
                                              const MatrixPoint& w) {
  if (!w.matches(f.shape().n)) throw ShapeMismatch("theta_from_pencil: point shape mismatch");
  const MatrixPoint z = point_to_halfplane(w);
  const std::vector<CMatrix> phis = phi(f, z);
  const CMatrix fz = eval_f(f, z);
  const CMatrix idu = CMatrix::Identity(fz.rows(), fz.cols());
  const CMatrix fw = solve_right(fz - idu, fz + idu, "theta_from_pencil");
  const CMatrix one_minus_f = idu - fw;
  std::vector<CMatrix> theta;
  theta.reserve(phis.size());
  for (std::size_t k = 0; k < phis.size(); ++k) {
    const Index nk = f.shape().n[k];
    const Index mk = f.shape().m[k];
    if (mk == 0) {
      theta.push_back(CMatrix(0, f.u()));
      continue;
    }
    const CMatrix resolvent =
        kron(CMatrix(CMatrix::Identity(nk, nk) - w.Z[k]),
             CMatrix::Identity(mk, mk));
    theta.push_back(solve(resolvent, phis[k], "theta_from_pencil") * one_minus_f);
  }
  return theta;
}

// Sampled kernel data on the disk product: values F(W) together with right
// (and optionally left) kernel factors on a common auxiliary space of
// dimension x, stacked as ((n_1+...+n_N) * x) x u columns.
struct KernelSamples {
  std::vector<Index> n;
  Index u = 0;
  Index x = 0;
  std::vector<MatrixPoint> points;
  std::vector<CMatrix> F;
  std::vector<CMatrix> HR;
  std::vector<CMatrix> HL;  // empty when absent; HL[i] is u x (sum_n * x)

  Index sum_n() const {
    Index s = 0;
    for (Index nk : n) s += nk;
    return s;
  }
  std::size_t size() const { return points.size(); }
  bool has_left() const { return !HL.empty(); }

  void validate() const {
    if (points.size() != F.size() || points.size() != HR.size() ||
        (has_left() && HL.size() != points.size()))
      throw ShapeMismatch("KernelSamples: ragged sample lists");
    const Index rows = sum_n() * x;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!points[i].matches(n))
        throw ShapeMismatch("KernelSamples: point shape mismatch");
      if (F[i].rows() != u || F[i].cols() != u)
        throw ShapeMismatch("KernelSamples: value size mismatch");
      if (HR[i].rows() != rows || HR[i].cols() != u)
        throw ShapeMismatch("KernelSamples: right factor size mismatch");
      if (has_left() && (HL[i].rows() != u || HL[i].cols() != rows))
        throw ShapeMismatch("KernelSamples: left factor size mismatch");
    }
  }
};

namespace detail {

// Embeds per-variable factors theta_k over M_k into the common auxiliary
// space M = M_1 ⊕ ... ⊕ M_N.
inline CMatrix embed_kernel_factors(const std::vector<CMatrix>& theta,
                                    const Shape& shape) {
  Index x = 0;
  for (Index mk : shape.m) x += mk;
  CMatrix hr = CMatrix::Zero(shape.sum_n() * x, shape.u);
  Index srow = 0;  // variable-row offset within C^{n_1+...+n_N}
  Index moff = 0;  // offset of M_k inside M
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const Index nk = shape.n[k];
    const Index mk = shape.m[k];
    for (Index i = 0; i < nk; ++i)
      for (Index a = 0; a < mk; ++a)
        hr.row((srow + i) * x + moff + a) = theta[k].row(i * mk + a);
    srow += nk;
    moff += mk;
  }
  return hr;
}

}  // namespace detail

// Kernel samples of the double Cayley transform of a pencil function, with
// factors from theta_from_pencil. When `with_left` is set the left factors
// are filled through HL(W) = HR(W^*)^*.
inline KernelSamples kernel_samples_from_pencil(
    const BessFunction& f, const std::vector<MatrixPoint>& points,
    bool with_left = false) {
  KernelSamples s;
  s.n = f.shape().n;
  s.u = f.u();
  s.x = 0;
  for (Index mk : f.shape().m) s.x += mk;
  const SchurAglerEvaluator fw = double_cayley(f);
  for (const MatrixPoint& w : points) {
    s.points.push_back(w);
    s.F.push_back(fw.eval(w));
    s.HR.push_back(detail::embed_kernel_factors(theta_from_pencil(f, w), f.shape()));
    if (with_left)
      s.HL.push_back(
          detail::embed_kernel_factors(theta_from_pencil(f, w.adjoint()), f.shape())
              .adjoint());
  }
  return s;
}

// Classical single-variable scalar route: right factors from the spectral
// factorization of the Pick matrix of the data (n = (1), u = 1).
inline KernelSamples pick_kernel_samples(const std::vector<Complex>& w,
                                         const std::vector<Complex>& values) {
  if (w.size() != values.size() || w.empty())
    throw ShapeMismatch("pick_kernel_samples: mismatched data");
  const Index k = static_cast<Index>(w.size());
  CMatrix pick(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      pick(i, j) = (1.0 - std::conj(values[static_cast<std::size_t>(i)]) *
                              values[static_cast<std::size_t>(j)]) /
                   (1.0 - std::conj(w[static_cast<std::size_t>(i)]) *
                              w[static_cast<std::size_t>(j)]);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(pick));
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -1e-9 * scale)
    throw NotPsd("pick_kernel_samples: Pick matrix not positive semidefinite");
  Index rank = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-12 * scale) ++rank;
  CMatrix factor(rank, k);  // factor^* factor = pick
  Index row = 0;
  for (Index i = ev.size() - 1; i >= 0 && row < rank; --i)
    if (ev(i) > 1e-12 * scale)
      factor.row(row++) = std::sqrt(ev(i)) * es.eigenvectors().col(i).adjoint();

  KernelSamples s;
  s.n = {1};
  s.u = 1;
  s.x = rank;
  for (Index i = 0; i < k; ++i) {
    s.points.push_back(MatrixPoint({(CMatrix(1, 1) << w[static_cast<std::size_t>(i)]).finished()}));
    s.F.push_back((CMatrix(1, 1) << values[static_cast<std::size_t>(i)]).finished());
    s.HR.push_back(factor.col(i));
  }
  return s;
}

// Residuals of the Agler kernel identities over all sample pairs. The right
// identity is always checked; the remaining blocks of the two-sided identity
// are checked when left factors are present.
inline Report verify_agler_identity(const KernelSamples& s, double tol) {
  s.validate();
  Report report;
  const Index sx = s.sum_n() * s.x;
  const CMatrix idm = CMatrix::Identity(sx, sx);
  const CMatrix idu = CMatrix::Identity(s.u, s.u);
  std::vector<CMatrix> px;
  px.reserve(s.size());
  for (const MatrixPoint& w : s.points)
    px.push_back(detail::state_point(s.n, s.x, w));

  auto run = [&](const std::string& name, auto&& residual) {
    CheckResult c{name, 0.0, tol, true, ""};
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j) {
        const double r = residual(i, j);
        if (r > c.max_residual) {
          c.max_residual = r;
          if (r > tol) c.witness = "sample pair (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")";
        }
      }
    c.pass = c.max_residual <= tol;
    report.add(std::move(c));
  };

  run("agler-right", [&](std::size_t i, std::size_t j) {
    return (idu - s.F[i].adjoint() * s.F[j] -
            s.HR[i].adjoint() * (idm - px[i].adjoint() * px[j]) * s.HR[j])
        .norm();
  });
  if (s.has_left()) {
    run("agler-left", [&](std::size_t i, std::size_t j) {
      return (idu - s.F[i] * s.F[j].adjoint() -
              s.HL[i] * (idm - px[i] * px[j].adjoint()) * s.HL[j].adjoint())
          .norm();
    });
    run("agler-mixed-row", [&](std::size_t i, std::size_t j) {
      return (s.F[i] - s.F[j] - s.HL[i] * (px[i] - px[j]) * s.HR[j]).norm();
    });
    run("agler-mixed-col", [&](std::size_t i, std::size_t j) {
      return (s.F[i].adjoint() - s.F[j].adjoint() -
              s.HR[i].adjoint() * (px[i].adjoint() - px[j].adjoint()) *
                  s.HL[j].adjoint())
          .norm();
    });
  }
  return report;
}

struct LurkingOptions {
  bool symmetric = false;
  // Involution on the ambient space (C^{n_1+...+n_N} ⊗ M) ⊕ U; when present
  // the completion keeps the colligation ι-real.
  std::optional<Involution> real_structure;
  double identity_tol = 1e-8;
  double gram_tol = 1e-7;
};

// Lurking-isometry construction: matches the Gram structures of the domain
// and range generator families, extends the coordinate isometry to a unitary
// colligation with a deterministic complement. With the symmetric flag the
// two generator families are swapped, which makes the colligation
// self-adjoint; the padding demanded by the defect equality is zero here
// because domain and range ambients coincide.
inline Colligation lurking_isometry(const KernelSamples& s,
                                    const LurkingOptions& opts = {}) {
  s.validate();
  if (s.size() == 0) throw InvalidInput("lurking_isometry: no samples");
  const Index sx = s.sum_n() * s.x;
  const Index amb = sx + s.u;

  const Report identities = verify_agler_identity(s, opts.identity_tol);
  if (!identities.pass())
    throw IdentityViolated("lurking_isometry: Agler identity fails at " +
                           std::to_string(identities.checks.front().max_residual));

  std::vector<CMatrix> px;
  px.reserve(s.size());
  for (const MatrixPoint& w : s.points)
    px.push_back(detail::state_point(s.n, s.x, w));

  if (opts.symmetric) {
    // Difference identity, needed for the swapped families to be isometric.
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j)
        worst = std::max(
            worst, (s.F[i] - s.F[j].adjoint() -
                    s.HR[j].adjoint() * (px[i] - px[j].adjoint()) * s.HR[i])
                       .norm());
    if (worst > opts.identity_tol)
      throw IdentityViolated(
          "lurking_isometry: difference identity fails at " + std::to_string(worst) +
          "; samples are not symmetric");
  }

  auto column_block = [&](const CMatrix& top, const CMatrix& bottom) {
    CMatrix c(amb, s.u);
    c.topRows(sx) = top;
    c.bottomRows(s.u) = bottom;
    return c;
  };

  const CMatrix idu = CMatrix::Identity(s.u, s.u);
  std::vector<CMatrix> dom_cols, ran_cols;
  for (std::size_t i = 0; i < s.size(); ++i) {
    dom_cols.push_back(column_block(px[i] * s.HR[i], idu));
    ran_cols.push_back(column_block(s.HR[i], s.F[i]));
  }
  if (opts.symmetric) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      dom_cols.push_back(column_block(s.HR[i], s.F[i]));
      ran_cols.push_back(column_block(px[i] * s.HR[i], idu));
    }
  } else if (s.has_left()) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      dom_cols.push_back(column_block(s.HL[i].adjoint(), s.F[i].adjoint()));
      ran_cols.push_back(column_block(px[i].adjoint() * s.HL[i].adjoint(), idu));
    }
  }

  CMatrix gd(amb, static_cast<Index>(dom_cols.size()) * s.u);
  CMatrix gr(amb, gd.cols());
  for (std::size_t i = 0; i < dom_cols.size(); ++i) {
    gd.middleCols(static_cast<Index>(i) * s.u, s.u) = dom_cols[i];
    gr.middleCols(static_cast<Index>(i) * s.u, s.u) = ran_cols[i];
  }

  const CMatrix gram_d = gd.adjoint() * gd;
  const CMatrix gram_r = gr.adjoint() * gr;
  if ((gram_d - gram_r).norm() > opts.gram_tol * (1.0 + gram_d.norm()))
    throw IsometryDefect("lurking_isometry: generator Gram matrices differ by " +
                         std::to_string((gram_d - gram_r).norm()));

  const CMatrix bd = orthonormal_span(gd, 1e-9);
  const CMatrix br = opts.symmetric ? bd : orthonormal_span(gr, 1e-9);
  if (bd.cols() != br.cols())
    throw IsometryDefect("lurking_isometry: domain and range ranks differ");

  // Coordinate action: the unitary closest (in Frobenius norm) to mapping the
  // domain coordinates of the generators onto their range coordinates.
  const CMatrix m = (br.adjoint() * gr) * (bd.adjoint() * gd).adjoint();
  CMatrix action;
  if (opts.symmetric) {
    // The cross-Gram is hermitian; its sign-polar factor keeps U = U^*.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
    CVector signs(es.eigenvalues().size());
    for (Index i = 0; i < signs.size(); ++i)
      signs(i) = es.eigenvalues()(i) < 0.0 ? -1.0 : 1.0;
    action = es.eigenvectors() * signs.asDiagonal() * es.eigenvectors().adjoint();
  } else {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    action = svd.matrixU() * svd.matrixV().adjoint();
  }

  const CMatrix u_mat =
      opts.real_structure
          ? real_unitary_completion(bd, br, action, *opts.real_structure)
          : unitary_completion(bd, br, action, 0);
  return Colligation(s.n, s.x, s.u, u_mat);
}

// 1 ∉ σ(F(0)): the feedthrough block may not have 1 as an eigenvalue.
inline bool check_spectrum_condition(const Colligation& c) {
  const CMatrix d = c.feedthrough();
  const CMatrix gap = CMatrix::Identity(c.u, c.u) - d;
  Eigen::JacobiSVD<CMatrix> svd(gap);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smin > 1e-9 * (1.0 + operator_norm(d));
}

inline SchurAglerEvaluator schur_agler_from_colligation(const Colligation& c) {
  return SchurAglerEvaluator(c.n, c.u, [c](const MatrixPoint& w) {
    return transfer_eval(c, w);
  });
}

struct ReconstructionOptions {
  std::uint64_t seed = 0x5eedf00dull;
  // Sample count: grid_factor * (u + state dim) random disk points plus W = 0.
  int grid_factor = 4;
  double validation_tol = 1e-6;
  int validation_points = 5;
};

// Recovers a pencil function from a self-adjoint unitary colligation via the
// disk-side factors xi_k and the substitution phi_k(Z) = sqrt(2)
// ((Z_k + I)^{-1} ⊗ I) xi_k(W(Z)), then rebuilds the pencil from phi samples.
inline BessFunction bess_from_colligation(const Colligation& c,
                                          const ReconstructionOptions& opts = {}) {
  if (c.selfadjoint_defect() > 1e-8 * (1.0 + c.U.norm()))
    throw NotSelfAdjoint("bess_from_colligation: colligation is not self-adjoint");
  if (!check_spectrum_condition(c))
    throw SpectrumAtOne("bess_from_colligation: 1 in the spectrum of F(0)");

  const Index sd = c.state_dim();
  const CMatrix ids = CMatrix::Identity(sd, sd);
  const CMatrix idu = CMatrix::Identity(c.u, c.u);

  Rng rng(opts.seed);
  std::vector<MatrixPoint> grid{MatrixPoint::zero(c.n)};
  const int extra = opts.grid_factor * static_cast<int>(c.u + sd);
  Rng grid_rng = rng.stream(1);
  for (int i = 0; i < extra; ++i)
    grid.push_back(random_disk_point(c.n, grid_rng, 0.05, 0.75));

  Shape shape;
  shape.n = c.n;
  shape.m.assign(c.n.size(), c.x);
  shape.u = c.u;
  shape.h = 0;

  std::vector<PhiSample> samples;
  samples.reserve(grid.size());
  for (const MatrixPoint& w : grid) {
    const CMatrix px = detail::state_point(c.n, c.x, w);
    const CMatrix reach =
        c.x == 0 ? CMatrix(0, c.u)
                 : solve(ids - c.state_block() * px, c.input_block(),
                         "bess_from_colligation");
    const CMatrix fw = c.feedthrough() + c.output_block() * px * reach;
    if (condition_number(idu - fw) > kSingularCond)
      throw SpectrumAtOne("bess_from_colligation: 1 in the spectrum of F(W)");
    const CMatrix xi_all =
        std::numbers::sqrt2 * solve_right(reach, idu - fw, "bess_from_colligation");
    const MatrixPoint z = point_to_halfplane(w);
    PhiSample sample;
    sample.point = z;
    Index off = 0;
    for (std::size_t k = 0; k < c.n.size(); ++k) {
      const Index nk = c.n[k];
      const CMatrix xi_k = xi_all.middleRows(off * c.x, nk * c.x);
      const CMatrix lift = kron(CMatrix(z.Z[k] + CMatrix::Identity(nk, nk)),
                                CMatrix::Identity(c.x, c.x));
      sample.phis.push_back(std::numbers::sqrt2 *
                            solve(lift, xi_k, "bess_from_colligation"));
      off += nk;
    }
    samples.push_back(std::move(sample));
  }

  BessFunction f = reconstruct_from_phi(samples, shape);

  const SchurAglerEvaluator round_trip = double_cayley(f);
  Rng check_rng = rng.stream(2);
  for (int i = 0; i < opts.validation_points; ++i) {
    const MatrixPoint w = random_disk_point(c.n, check_rng, 0.05, 0.75);
    const CMatrix want = transfer_eval(c, w);
    if ((round_trip.eval(w) - want).norm() >
        opts.validation_tol * (1.0 + want.norm()))
      throw InconsistentSamples(
          "bess_from_colligation: recovered pencil fails held-out validation");
  }
  return f;
}

}  // namespace bess
