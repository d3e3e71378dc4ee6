#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "bess/colligation.hpp"
#include "bess/involution.hpp"
#include "bess/numkit.hpp"
#include "bess/pencil.hpp"
#include "bess/rng.hpp"
#include "bess/sampling.hpp"
#include "bess/types.hpp"

namespace bess {

// f^#(Z) := ι f(conj(Z)) ι = f(Z) on the given sample points, with conj(Z)
// the entrywise conjugate. In matrix form the left side is
// J conj(f(conj(Z))) conj(J).
inline bool is_real_function(
    const std::function<CMatrix(const MatrixPoint&)>& eval, const Involution& inv,
    const std::vector<MatrixPoint>& points, double tol = 1e-9) {
  for (const MatrixPoint& z : points) {
    const CMatrix direct = eval(z);
    const CMatrix sharp = inv.matrix() * eval(z.conjugate()).conjugate() *
                          inv.matrix().conjugate();
    if ((sharp - direct).norm() > tol) return false;
  }
  return true;
}

inline bool is_real_function(const BessFunction& f, const Involution& inv,
                             const std::vector<MatrixPoint>& points,
                             double tol = 1e-9) {
  return is_real_function(
      [&f](const MatrixPoint& z) { return eval_f(f, z); }, inv, points, tol);
}

// Doubled decomposition of a real function: each factor phi_k is paired with
// its conjugated copy on M_k ⊕ M_k carrying the swap involution, making the
// new factors real while preserving the decomposition identity.
struct RealifiedDecomposition {
  BessFunction f;
  Shape shape;                        // m_k doubled
  Involution u_involution;
  std::vector<Involution> m_involutions;        // swap involutions on M_k ⊕ M_k
  std::vector<Involution> source_m_involutions;

  RealifiedDecomposition(BessFunction f_, Involution u_inv,
                         std::vector<Involution> src_m)
      : f(std::move(f_)),
        shape(f.shape()),
        u_involution(std::move(u_inv)),
        source_m_involutions(std::move(src_m)) {
    for (std::size_t k = 0; k < shape.m.size(); ++k) {
      m_involutions.push_back(swap_involution(source_m_involutions[k]));
      shape.m[k] *= 2;
    }
  }

  // phi~_k(Z) = (1/sqrt 2) V_k^{-1} [phi_k(Z); (ι_{n_k} ⊗ ι_{M_k}) phi_k(conj Z) ι_U].
  std::vector<CMatrix> phi_tilde(const MatrixPoint& z) const {
    const std::vector<CMatrix> direct = phi(f, z);
    const std::vector<CMatrix> conjugated = phi(f, z.conjugate());
    std::vector<CMatrix> out;
    out.reserve(direct.size());
    for (std::size_t k = 0; k < direct.size(); ++k) {
      const Index nk = f.shape().n[k];
      const Index mk = f.shape().m[k];
      const CMatrix& jm = source_m_involutions[k].matrix();
      const CMatrix& ju = u_involution.matrix();
      const CMatrix mirrored = kron(CMatrix::Identity(nk, nk), jm) *
                               conjugated[k].conjugate() * ju.conjugate();
      // Stacked layout [phi; mirrored] lives on (C^{n_k} ⊗ M_k)^2; the
      // rearrangement interleaves the two copies of M_k per variable row.
      CMatrix tilde(2 * nk * mk, f.u());
      for (Index i = 0; i < nk; ++i) {
        tilde.middleRows(i * 2 * mk, mk) = direct[k].middleRows(i * mk, mk);
        tilde.middleRows(i * 2 * mk + mk, mk) = mirrored.middleRows(i * mk, mk);
      }
      out.push_back(tilde / std::numbers::sqrt2);
    }
    return out;
  }
};

struct RealifyOptions {
  std::uint64_t seed = 0xa11cee5ull;
  int validation_points = 8;
  double realness_tol = 1e-8;
};

inline RealifiedDecomposition realify_decomposition(
    const BessFunction& f, const Involution& inv_u,
    const std::vector<Involution>& inv_m, const RealifyOptions& opts = {}) {
  if (inv_u.dim() != f.u())
    throw ShapeMismatch("realify_decomposition: output involution size mismatch");
  if (inv_m.size() != f.shape().m.size())
    throw ShapeMismatch("realify_decomposition: one M-involution per variable required");
  for (std::size_t k = 0; k < inv_m.size(); ++k)
    if (inv_m[k].dim() != f.shape().m[k])
      throw ShapeMismatch("realify_decomposition: M-involution size mismatch");

  Rng rng(opts.seed);
  std::vector<MatrixPoint> grid;
  for (int i = 0; i < opts.validation_points; ++i)
    grid.push_back(random_halfplane_point(f.shape().n, rng));
  if (!is_real_function(f, inv_u, grid, opts.realness_tol))
    throw NotRealFunction("realify_decomposition: function is not ι-real");

  return RealifiedDecomposition(f, inv_u, inv_m);
}

// The colligation operator must commute with (ι_{n_1+...+n_N} ⊗ ι_X) ⊕ ι_U.
inline bool check_real_colligation(const Colligation& c, const Involution& inv_x,
                                   const Involution& inv_u, double tol = 1e-8) {
  if (inv_x.dim() != c.x || inv_u.dim() != c.u)
    throw ShapeMismatch("check_real_colligation: involution size mismatch");
  const Involution big = direct_sum_involution(
      tensor_involution(Involution::standard(c.sum_n()), inv_x), inv_u);
  return is_real_operator(c.U, big, big, tol);
}

}  // namespace bess
