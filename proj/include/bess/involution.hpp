#pragma once

#include <utility>
#include <vector>

#include "bess/numkit.hpp"
#include "bess/types.hpp"

namespace bess {

// Anti-unitary involution ι(x) = J conj(x), stored as the unitary factor J
// with J conj(J) = I. Anti-linear maps are never materialized as linear
// matrices; every application conjugates explicitly.
class Involution {
 public:
  explicit Involution(CMatrix j) : j_(std::move(j)) {
    if (j_.rows() != j_.cols()) throw ShapeMismatch("Involution: J must be square");
    const Index n = j_.rows();
    if ((j_.adjoint() * j_ - CMatrix::Identity(n, n)).norm() > 1e-10)
      throw NotInvolution("Involution: J is not unitary");
    if ((j_ * j_.conjugate() - CMatrix::Identity(n, n)).norm() > 1e-10)
      throw NotInvolution("Involution: J conj(J) != I");
  }

  static Involution standard(Index n) { return Involution(CMatrix::Identity(n, n)); }

  Index dim() const { return j_.rows(); }
  const CMatrix& matrix() const { return j_; }

  CVector apply(const CVector& v) const { return j_ * v.conjugate(); }

  // ι applied to each column.
  CMatrix apply_columns(const CMatrix& v) const { return j_ * v.conjugate(); }

 private:
  CMatrix j_;
};

inline Involution tensor_involution(const Involution& a, const Involution& b) {
  return Involution(kron(a.matrix(), b.matrix()));
}

inline Involution direct_sum_involution(const Involution& a, const Involution& b) {
  CMatrix j = CMatrix::Zero(a.dim() + b.dim(), a.dim() + b.dim());
  j.topLeftCorner(a.dim(), a.dim()) = a.matrix();
  j.bottomRightCorner(b.dim(), b.dim()) = b.matrix();
  return Involution(std::move(j));
}

// Swap involution on M ⊕ M used by the doubling construction.
inline Involution swap_involution(const Involution& m) {
  CMatrix j = CMatrix::Zero(2 * m.dim(), 2 * m.dim());
  j.topRightCorner(m.dim(), m.dim()) = m.matrix();
  j.bottomLeftCorner(m.dim(), m.dim()) = m.matrix();
  return Involution(std::move(j));
}

// ι_ran A = A ι_dom, i.e. J_ran conj(A) = A J_dom.
inline bool is_real_operator(const CMatrix& a, const Involution& dom,
                             const Involution& ran, double tol = 1e-10) {
  if (a.cols() != dom.dim() || a.rows() != ran.dim())
    throw ShapeMismatch("is_real_operator: size mismatch with involutions");
  return (ran.matrix() * a.conjugate() - a * dom.matrix()).norm() <=
         tol * (1.0 + a.norm());
}

namespace detail {

// Orthonormal basis of span(columns) consisting of ι-fixed vectors. Exists
// exactly when the span is ι-invariant; returns an empty optional-like flag
// via exception when the fixed subspace is deficient.
inline CMatrix fixed_point_basis(const CMatrix& basis, const Involution& inv) {
  const Index want = basis.cols();
  CMatrix out(basis.rows(), want);
  Index got = 0;
  auto try_accept = [&](CVector v) {
    if (got >= want) return;
    v -= out.leftCols(got) * (out.leftCols(got).adjoint() * v);
    v -= out.leftCols(got) * (out.leftCols(got).adjoint() * v);
    const double nrm = v.norm();
    if (nrm > 1e-6) out.col(got++) = v / nrm;
  };
  for (Index j = 0; j < basis.cols() && got < want; ++j) {
    const CVector c = basis.col(j);
    const CVector ic = inv.apply(c);
    try_accept(c + ic);
    try_accept(Complex(0, 1) * (c - ic));
  }
  if (got < want)
    throw NotInvariant("fixed_point_basis: fixed subspace has deficient dimension");
  const CMatrix f = out.leftCols(want);
  // The fixed vectors must still span the original subspace.
  if ((basis * basis.adjoint() - f * f.adjoint()).norm() > 1e-7)
    throw NotInvariant("fixed_point_basis: span not invariant under the involution");
  return f;
}

inline double invariance_loss(const CMatrix& basis, const Involution& inv) {
  if (basis.cols() == 0) return 0.0;
  const CMatrix image = inv.apply_columns(basis);
  return (image - basis * (basis.adjoint() * image)).norm();
}

}  // namespace detail

// Unitary completion whose complement action is ι-real: the complement of the
// domain (and of the acted range) gets an ι-fixed orthonormal basis, paired in
// order. When domain and range spans coincide the complement map is the
// identity. The prescribed action must itself be ι-compatible for the result
// to be ι-real; this is verified at the end.
inline CMatrix real_unitary_completion(const CMatrix& dom_basis,
                                       const CMatrix& ran_basis,
                                       const CMatrix& action,
                                       const Involution& inv) {
  if (dom_basis.rows() != ran_basis.rows() || dom_basis.rows() != inv.dim())
    throw ShapeMismatch("real_unitary_completion: ambient dimensions differ");
  if (action.rows() != ran_basis.cols() || action.cols() != dom_basis.cols())
    throw ShapeMismatch("real_unitary_completion: action has wrong size");
  detail::require_orthonormal(dom_basis, "real_unitary_completion dom");
  detail::require_orthonormal(ran_basis, "real_unitary_completion ran");

  if (detail::invariance_loss(dom_basis, inv) > 1e-9 * (1.0 + std::sqrt(double(dom_basis.cols()))))
    throw NotInvariant("real_unitary_completion: domain span not ι-invariant");
  const CMatrix ran_acted = ran_basis * action;
  if (detail::invariance_loss(ran_acted, inv) > 1e-9 * (1.0 + std::sqrt(double(ran_acted.cols()))))
    throw NotInvariant("real_unitary_completion: range span not ι-invariant");

  const CMatrix cd = detail::complement_basis(dom_basis);
  const CMatrix cr = detail::complement_basis(ran_acted);
  const CMatrix fd = detail::fixed_point_basis(cd, inv);
  const CMatrix fr = detail::fixed_point_basis(cr, inv);

  const Index n = inv.dim();
  CMatrix dom_full(n, n), ran_full(n, n);
  dom_full << dom_basis, fd;
  ran_full << ran_acted, fr;
  const CMatrix u = ran_full * dom_full.adjoint();

  if (!is_real_operator(u, inv, inv, 1e-8))
    throw NotInvariant("real_unitary_completion: prescribed action is not ι-real");
  return u;
}

}  // namespace bess
