#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "bess/types.hpp"

namespace bess {

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

// Largest singular value.
inline double operator_norm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(a).singularValues()(0);
}

// sigma_max / sigma_min; +inf when numerically singular.
inline double condition_number(const CMatrix& a) {
  if (a.rows() == 0) return 1.0;
  const auto sv = Eigen::JacobiSVD<CMatrix>(a).singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

// Smallest eigenvalue of the hermitian part (A + A*)/2.
inline double min_eig_herm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("min_eig_herm: matrix not square");
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Solves A X = B, refusing ill-conditioned A.
inline CMatrix solve(const CMatrix& a, const CMatrix& b,
                     const std::string& what = "solve") {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw ShapeMismatch(what + ": incompatible dimensions");
  if (a.rows() == 0) return CMatrix(0, b.cols());
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) * kSingularCond <= sv(0) || sv(0) == 0.0)
    throw SingularBlock(what + ": block numerically singular");
  return svd.solve(b);
}

// Solves X A = B.
inline CMatrix solve_right(const CMatrix& b, const CMatrix& a,
                           const std::string& what = "solve") {
  return solve(a.transpose(), b.transpose(), what).transpose();
}

// M11 - M12 M22^{-1} M21 with the split after row/column `top`.
inline CMatrix schur_complement(const CMatrix& m, Index top) {
  if (m.rows() != m.cols()) throw ShapeMismatch("schur_complement: matrix not square");
  if (top < 0 || top > m.rows())
    throw ShapeMismatch("schur_complement: split index out of range");
  const Index bot = m.rows() - top;
  if (bot == 0) return m;
  const CMatrix m11 = m.topLeftCorner(top, top);
  const CMatrix m12 = m.topRightCorner(top, bot);
  const CMatrix m21 = m.bottomLeftCorner(bot, top);
  const CMatrix m22 = m.bottomRightCorner(bot, bot);
  return m11 - m12 * solve(m22, m21, "schur_complement");
}

// Orthonormal basis of the column span; singular values below tol * sigma_max
// are treated as zero. Empty or zero input yields a zero-column result.
inline CMatrix orthonormal_span(const CMatrix& columns, double tol = 1e-9) {
  if (columns.cols() == 0) return CMatrix(columns.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return CMatrix(columns.rows(), 0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

inline CMatrix orthonormal_span(const std::vector<CVector>& vectors,
                                double tol = 1e-9) {
  if (vectors.empty()) return CMatrix(0, 0);
  CMatrix cols(vectors.front().size(), static_cast<Index>(vectors.size()));
  for (Index j = 0; j < cols.cols(); ++j) {
    if (vectors[static_cast<std::size_t>(j)].size() != cols.rows())
      throw ShapeMismatch("orthonormal_span: vectors of unequal height");
    cols.col(j) = vectors[static_cast<std::size_t>(j)];
  }
  return orthonormal_span(cols, tol);
}

namespace detail {

// Orthonormal basis of the complement of span(basis), built by Gram-Schmidt
// over the standard basis vectors in order (re-orthogonalized once). The
// ordering makes completions reproducible.
inline CMatrix complement_basis(const CMatrix& basis) {
  const Index n = basis.rows();
  const Index want = n - basis.cols();
  CMatrix out(n, want);
  Index got = 0;
  auto project_out = [&](CVector& v) {
    if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
    if (got > 0) v -= out.leftCols(got) * (out.leftCols(got).adjoint() * v);
  };
  for (Index i = 0; i < n && got < want; ++i) {
    CVector v = CVector::Zero(n);
    v(i) = 1.0;
    project_out(v);
    project_out(v);
    const double nrm = v.norm();
    if (nrm > 1e-8) {
      out.col(got++) = v / nrm;
    }
  }
  if (got < want) {
    // Greedy sweep missed directions (near-degenerate spans); take the rest
    // from the null space of the projector.
    CMatrix proj = CMatrix::Identity(n, n);
    if (basis.cols() > 0) proj -= basis * basis.adjoint();
    if (got > 0) proj -= out.leftCols(got) * out.leftCols(got).adjoint();
    const CMatrix extra = orthonormal_span(proj, 1e-6);
    for (Index j = 0; j < extra.cols() && got < want; ++j) out.col(got++) = extra.col(j);
    if (got < want)
      throw DefectMismatch("complement_basis: could not complete the basis");
  }
  return out;
}

inline void require_orthonormal(const CMatrix& basis, const std::string& what) {
  if (basis.cols() == 0) return;
  const double defect =
      (basis.adjoint() * basis - CMatrix::Identity(basis.cols(), basis.cols()))
          .norm();
  if (defect > 1e-7)
    throw InvalidInput(what + ": columns not orthonormal (defect " +
                       std::to_string(defect) + ")");
}

}  // namespace detail

// Unitary U on the ambient space (padded by `pad` extra dimensions) with
// U * dom_basis = ran_basis * action. The complement map is deterministic:
// the i-th Gram-Schmidt complement vector of the domain goes to the i-th one
// of the range, so identical domain and range spans get the identity there.
inline CMatrix unitary_completion(const CMatrix& dom_basis,
                                  const CMatrix& ran_basis,
                                  const CMatrix& action, Index pad = 0) {
  if (dom_basis.rows() != ran_basis.rows())
    throw DefectMismatch("unitary_completion: ambient dimensions differ");
  if (action.rows() != ran_basis.cols() || action.cols() != dom_basis.cols())
    throw ShapeMismatch("unitary_completion: action has wrong size");
  detail::require_orthonormal(dom_basis, "unitary_completion dom");
  detail::require_orthonormal(ran_basis, "unitary_completion ran");
  if (action.cols() > 0) {
    const double iso =
        (action.adjoint() * action - CMatrix::Identity(action.cols(), action.cols()))
            .norm();
    if (iso > 1e-7)
      throw IsometryDefect("unitary_completion: action is not an isometry");
  }
  const Index n = dom_basis.rows() + pad;
  const Index r = dom_basis.cols();
  if (r > n) throw DefectMismatch("unitary_completion: domain larger than ambient");

  CMatrix bd = CMatrix::Zero(n, r);
  bd.topRows(dom_basis.rows()) = dom_basis;
  CMatrix br = CMatrix::Zero(n, r);
  br.topRows(ran_basis.rows()) = ran_basis * action;

  const CMatrix cd = detail::complement_basis(bd);
  const CMatrix cr = detail::complement_basis(br);

  CMatrix dom_full(n, n), ran_full(n, n);
  dom_full << bd, cd;
  ran_full << br, cr;
  return ran_full * dom_full.adjoint();
}

}  // namespace bess
