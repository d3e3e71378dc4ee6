#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bess/domain.hpp"
#include "bess/numkit.hpp"
#include "bess/types.hpp"

namespace bess {

// Linear pencil A(Z) = Σ_k G_k^* (Z_k ⊗ I_{m_k}) G_k on U ⊕ H. Positivity of
// A at tuples of positive definite arguments is automatic from the factored
// form; A(E) = Σ G_k^* G_k is positive semidefinite by construction.
struct PsdPencil {
  Shape shape;
  std::vector<CMatrix> G;  // G_k of size (n_k * m_k) x (u + h)

  PsdPencil() = default;
  PsdPencil(Shape s, std::vector<CMatrix> g) : shape(std::move(s)), G(std::move(g)) {
    shape.validate();
    if (G.size() != shape.n.size())
      throw ShapeMismatch("PsdPencil: one factor per variable required");
    for (std::size_t k = 0; k < G.size(); ++k) {
      if (G[k].rows() != shape.n[k] * shape.m[k] ||
          G[k].cols() != shape.pencil_dim())
        throw ShapeMismatch("PsdPencil: factor size mismatch");
    }
  }
};

inline CMatrix eval_pencil(const PsdPencil& p, const MatrixPoint& z) {
  if (!z.matches(p.shape.n)) throw ShapeMismatch("eval_pencil: point shape mismatch");
  const Index dim = p.shape.pencil_dim();
  CMatrix a = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < p.G.size(); ++k) {
    const Index mk = p.shape.m[k];
    if (mk == 0) continue;
    a += p.G[k].adjoint() *
         kron(z.Z[k], CMatrix::Identity(mk, mk)) * p.G[k];
  }
  return a;
}

// Factors scalar-variable coefficients A_j >= 0 into a pencil with n_k = 1,
// taking m_j to be the numerical rank of A_j. The first `u` rows/columns of
// the coefficients form the output block.
inline PsdPencil pencil_from_scalar_coefficients(const std::vector<CMatrix>& a,
                                                 Index u) {
  if (a.empty()) throw ShapeMismatch("pencil_from_scalar_coefficients: no coefficients");
  const Index dim = a.front().rows();
  if (u < 1 || u > dim)
    throw ShapeMismatch("pencil_from_scalar_coefficients: invalid output dimension");
  Shape shape;
  shape.u = u;
  shape.h = dim - u;
  std::vector<CMatrix> g;
  for (const CMatrix& aj : a) {
    if (aj.rows() != dim || aj.cols() != dim)
      throw ShapeMismatch("pencil_from_scalar_coefficients: coefficients of unequal size");
    const double scale = aj.norm();
    if ((aj - aj.adjoint()).norm() > 1e-9 * (1.0 + scale))
      throw NotPsd("pencil_from_scalar_coefficients: coefficient not hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(aj));
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-9 * std::max(1.0, scale))
      throw NotPsd("pencil_from_scalar_coefficients: coefficient not positive semidefinite");
    Index rank = 0;
    for (Index i = 0; i < ev.size(); ++i)
      if (ev(i) > 1e-12 * std::max(1.0, scale)) ++rank;
    CMatrix gj(rank, dim);
    Index row = 0;
    for (Index i = ev.size() - 1; i >= 0 && row < rank; --i) {
      // Eigenvalues ascend; take the positive ones from the top.
      if (ev(i) > 1e-12 * std::max(1.0, scale))
        gj.row(row++) = std::sqrt(ev(i)) * es.eigenvectors().col(i).adjoint();
    }
    shape.n.push_back(1);
    shape.m.push_back(rank);
    g.push_back(std::move(gj));
  }
  return PsdPencil(std::move(shape), std::move(g));
}

// Schur-complement representative f(Z) = a(Z) - b(Z) d(Z)^{-1} c(Z) of a
// positive pencil, with the block split after the first u rows/columns.
struct BessFunction {
  PsdPencil pencil;

  BessFunction() = default;
  explicit BessFunction(PsdPencil p) : pencil(std::move(p)) {}

  const Shape& shape() const { return pencil.shape; }
  Index u() const { return pencil.shape.u; }
  Index h() const { return pencil.shape.h; }
};

namespace detail {

// Rotates an Omega point into the halfplane product when needed. Returns the
// rotated point and the phase used (1 when no rotation was applied).
inline std::pair<MatrixPoint, Complex> to_halfplane_rep(const MatrixPoint& z) {
  if (z.in_halfplane()) return {z, Complex(1.0, 0.0)};
  if (auto lambda = locate_omega_lambda(z))
    return {z.scaled(*lambda), *lambda};
  return {z, Complex(1.0, 0.0)};  // outside Omega; let the solve decide
}

}  // namespace detail

inline CMatrix eval_f(const BessFunction& f, const MatrixPoint& z) {
  if (!z.matches(f.shape().n)) throw ShapeMismatch("eval_f: point shape mismatch");
  const auto [zh, lambda] = detail::to_halfplane_rep(z);
  const CMatrix a = eval_pencil(f.pencil, zh);
  const CMatrix value =
      f.h() == 0 ? a : schur_complement(a, f.u());
  // Degree-one homogeneity undoes the rotation.
  return value / lambda;
}

// phi_k(Z) = G_k [I; -d(Z)^{-1} c(Z)], homogeneous of degree zero.
inline std::vector<CMatrix> phi(const BessFunction& f, const MatrixPoint& z) {
  if (!z.matches(f.shape().n)) throw ShapeMismatch("phi: point shape mismatch");
  const auto [zh, lambda] = detail::to_halfplane_rep(z);
  (void)lambda;
  const Index u = f.u(), h = f.h();
  const CMatrix a = eval_pencil(f.pencil, zh);
  CMatrix psi(u + h, u);
  psi.topRows(u) = CMatrix::Identity(u, u);
  if (h > 0) {
    const CMatrix c = a.bottomLeftCorner(h, u);
    const CMatrix d = a.bottomRightCorner(h, h);
    psi.bottomRows(h) = -solve(d, c, "phi");
  }
  std::vector<CMatrix> out;
  out.reserve(f.pencil.G.size());
  for (const CMatrix& gk : f.pencil.G) out.push_back(gk * psi);
  return out;
}

// Rational functional calculus: substitutes the d x d entry blocks of R into
// the pencil coefficients, then takes the Schur complement over the amplified
// internal block. For scalar-entry tuples this reduces to kron(f(Z), I_d).
inline CMatrix eval_f_operator(const BessFunction& f, const OperatorTuple& r) {
  const Shape& s = f.shape();
  if (r.n != s.n) throw ShapeMismatch("eval_f_operator: tuple shape mismatch");
  r.require_commuting();
  const Index d = r.d;
  const Index dim = s.pencil_dim();
  CMatrix big = CMatrix::Zero(dim * d, dim * d);
  for (Index k = 0; k < s.vars(); ++k) {
    const Index nk = s.n[static_cast<std::size_t>(k)];
    const Index mk = s.m[static_cast<std::size_t>(k)];
    if (mk == 0) continue;
    const CMatrix& gk = f.pencil.G[static_cast<std::size_t>(k)];
    for (Index i = 0; i < nk; ++i) {
      const CMatrix gi = gk.middleRows(i * mk, mk);
      for (Index j = 0; j < nk; ++j) {
        const CMatrix gj = gk.middleRows(j * mk, mk);
        // Coefficient of (Z_k)_{ij} in A(Z).
        big += kron(CMatrix(gi.adjoint() * gj), r.block(k, i, j));
      }
    }
  }
  if (s.h == 0) return big;
  return schur_complement(big, s.u * d);
}

// One sampled evaluation of the decomposition maps.
struct PhiSample {
  MatrixPoint point;
  std::vector<CMatrix> phis;  // phi_k, sizes (n_k * m_k) x u
};

// Rebuilds a pencil from sampled phi_k. The samples must contain the base
// point E = (I, ..., I) and be mutually consistent: the sesquilinear sums
// Σ_k phi_k(Λ)^* (Z_k ⊗ I) phi_k(Z) may not depend on Λ. The internal space
// is spanned by the sampled differences phi(Λ) - phi(E).
inline BessFunction reconstruct_from_phi(const std::vector<PhiSample>& samples,
                                         const Shape& shape_in) {
  Shape shape = shape_in;
  shape.h = 0;
  shape.validate();
  if (samples.empty()) throw MissingBasePoint("reconstruct_from_phi: no samples");
  const Index nm = shape.sum_nm();
  const Index u = shape.u;

  auto stack = [&](const PhiSample& s) {
    if (!s.point.matches(shape.n))
      throw ShapeMismatch("reconstruct_from_phi: sample point shape mismatch");
    if (s.phis.size() != shape.n.size())
      throw ShapeMismatch("reconstruct_from_phi: sample must carry every phi_k");
    CMatrix full(nm, u);
    for (Index k = 0; k < shape.vars(); ++k) {
      const CMatrix& pk = s.phis[static_cast<std::size_t>(k)];
      if (pk.rows() != shape.n[static_cast<std::size_t>(k)] *
                           shape.m[static_cast<std::size_t>(k)] ||
          pk.cols() != u)
        throw ShapeMismatch("reconstruct_from_phi: phi_k size mismatch");
      full.middleRows(shape.row_offset(k), pk.rows()) = pk;
    }
    return full;
  };

  std::optional<std::size_t> base;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double dist = 0.0;
    for (Index k = 0; k < shape.vars(); ++k) {
      const CMatrix& zk = samples[i].point.Z[static_cast<std::size_t>(k)];
      dist = std::max(dist,
                      (zk - CMatrix::Identity(zk.rows(), zk.cols())).norm());
    }
    if (dist <= 1e-9) {
      base = i;
      break;
    }
  }
  if (!base)
    throw MissingBasePoint("reconstruct_from_phi: base point E = (I,...,I) absent");

  std::vector<CMatrix> stacked;
  stacked.reserve(samples.size());
  for (const PhiSample& s : samples) stacked.push_back(stack(s));

  // The weighted pairing Σ_k phi_k(Λ_i)^* ((Λ_l)_k ⊗ I) phi_k(Λ_l) must agree
  // for every probe index i; the value at i = base is the function value.
  auto pairing = [&](std::size_t i, std::size_t l) {
    CMatrix v = CMatrix::Zero(u, u);
    for (Index k = 0; k < shape.vars(); ++k) {
      const Index mk = shape.m[static_cast<std::size_t>(k)];
      if (mk == 0) continue;
      const Index off = shape.row_offset(k);
      const Index rows = shape.n[static_cast<std::size_t>(k)] * mk;
      v += stacked[i].middleRows(off, rows).adjoint() *
           kron(samples[l].point.Z[static_cast<std::size_t>(k)],
                CMatrix::Identity(mk, mk)) *
           stacked[l].middleRows(off, rows);
    }
    return v;
  };

  std::vector<CMatrix> values(samples.size());
  for (std::size_t l = 0; l < samples.size(); ++l) {
    values[l] = pairing(*base, l);
    const double scale = 1.0 + values[l].norm();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if ((pairing(i, l) - values[l]).norm() > 1e-8 * scale)
        throw InconsistentSamples(
            "reconstruct_from_phi: decomposition identity fails on the sample grid");
    }
  }

  // Internal space H := span{(phi(Λ) - phi(E)) e_j}. The differences are
  // orthogonal to the range of phi(E) by the validated identity; enforcing
  // that numerically (and cutting ranks against the overall phi scale, not
  // the difference scale) keeps pure-roundoff directions out of H.
  double phi_scale = 0.0;
  for (const CMatrix& s : stacked) phi_scale = std::max(phi_scale, s.norm());
  CMatrix h_basis(nm, 0);
  if (samples.size() > 1 && nm > 0 && phi_scale > 0.0) {
    CMatrix diffs(nm, static_cast<Index>(samples.size() - 1) * u);
    Index col = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (i == *base) continue;
      diffs.middleCols(col, u) = stacked[i] - stacked[*base];
      col += u;
    }
    const CMatrix base_range = orthonormal_span(stacked[*base], 1e-12);
    if (base_range.cols() > 0)
      diffs -= base_range * (base_range.adjoint() * diffs);
    Eigen::JacobiSVD<CMatrix> svd(diffs, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-9 * phi_scale) ++rank;
    h_basis = svd.matrixU().leftCols(rank);
  }

  Shape out_shape = shape;
  out_shape.h = h_basis.cols();
  CMatrix embed(nm, u + out_shape.h);
  embed.leftCols(u) = stacked[*base];
  embed.rightCols(out_shape.h) = h_basis;

  std::vector<CMatrix> g;
  g.reserve(static_cast<std::size_t>(shape.vars()));
  for (Index k = 0; k < shape.vars(); ++k)
    g.push_back(embed.middleRows(
        shape.row_offset(k),
        shape.n[static_cast<std::size_t>(k)] * shape.m[static_cast<std::size_t>(k)]));

  BessFunction f{PsdPencil(out_shape, std::move(g))};
  for (std::size_t l = 0; l < samples.size(); ++l) {
    const double scale = 1.0 + values[l].norm();
    if ((eval_f(f, samples[l].point) - values[l]).norm() > 1e-7 * scale)
      throw InconsistentSamples(
          "reconstruct_from_phi: rebuilt pencil does not reproduce the samples");
  }
  return f;
}

}  // namespace bess
