#pragma once

#include <algorithm>
#include <numbers>
#include <optional>
#include <vector>

#include "bess/numkit.hpp"
#include "bess/types.hpp"

namespace bess {

// Dimension data of a pencil: variable sizes n_k, multiplicities m_k, output
// dimension u and internal dimension h.
struct Shape {
  std::vector<Index> n;
  std::vector<Index> m;
  Index u = 0;
  Index h = 0;

  Index vars() const { return static_cast<Index>(n.size()); }
  Index pencil_dim() const { return u + h; }
  Index sum_n() const {
    Index s = 0;
    for (Index nk : n) s += nk;
    return s;
  }
  Index sum_nm() const {
    Index s = 0;
    for (std::size_t k = 0; k < n.size(); ++k) s += n[k] * m[k];
    return s;
  }
  // Row offset of the k-th block in the stacked space ⊕_k C^{n_k} ⊗ M_k.
  Index row_offset(Index k) const {
    Index s = 0;
    for (Index j = 0; j < k; ++j) s += n[static_cast<std::size_t>(j)] * m[static_cast<std::size_t>(j)];
    return s;
  }

  void validate() const {
    if (n.empty() || n.size() != m.size())
      throw ShapeMismatch("Shape: need N >= 1 with matching n and m lists");
    for (Index nk : n)
      if (nk < 1) throw ShapeMismatch("Shape: n_k must be positive");
    for (Index mk : m)
      if (mk < 0) throw ShapeMismatch("Shape: m_k must be nonnegative");
    if (u < 1) throw ShapeMismatch("Shape: u must be positive");
    if (h < 0) throw ShapeMismatch("Shape: h must be nonnegative");
  }
};

// A point Z = (Z_1, ..., Z_N) with square matrix components.
struct MatrixPoint {
  std::vector<CMatrix> Z;

  MatrixPoint() = default;
  explicit MatrixPoint(std::vector<CMatrix> z) : Z(std::move(z)) {
    for (const CMatrix& zk : Z)
      if (zk.rows() != zk.cols())
        throw ShapeMismatch("MatrixPoint: components must be square");
  }

  static MatrixPoint identity(const std::vector<Index>& n) {
    std::vector<CMatrix> z;
    z.reserve(n.size());
    for (Index nk : n) z.push_back(CMatrix::Identity(nk, nk));
    return MatrixPoint(std::move(z));
  }

  static MatrixPoint zero(const std::vector<Index>& n) {
    std::vector<CMatrix> z;
    z.reserve(n.size());
    for (Index nk : n) z.push_back(CMatrix::Zero(nk, nk));
    return MatrixPoint(std::move(z));
  }

  Index vars() const { return static_cast<Index>(Z.size()); }

  std::vector<Index> sizes() const {
    std::vector<Index> n;
    n.reserve(Z.size());
    for (const CMatrix& zk : Z) n.push_back(zk.rows());
    return n;
  }

  bool matches(const std::vector<Index>& n) const {
    if (Z.size() != n.size()) return false;
    for (std::size_t k = 0; k < n.size(); ++k)
      if (Z[k].rows() != n[k]) return false;
    return true;
  }

  MatrixPoint scaled(Complex lambda) const {
    std::vector<CMatrix> z;
    z.reserve(Z.size());
    for (const CMatrix& zk : Z) z.push_back(lambda * zk);
    return MatrixPoint(std::move(z));
  }

  // Componentwise adjoint (Z_1^*, ..., Z_N^*).
  MatrixPoint adjoint() const {
    std::vector<CMatrix> z;
    z.reserve(Z.size());
    for (const CMatrix& zk : Z) z.push_back(zk.adjoint());
    return MatrixPoint(std::move(z));
  }

  // Entrywise conjugate.
  MatrixPoint conjugate() const {
    std::vector<CMatrix> z;
    z.reserve(Z.size());
    for (const CMatrix& zk : Z) z.push_back(zk.conjugate());
    return MatrixPoint(std::move(z));
  }

  double halfplane_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const CMatrix& zk : Z) m = std::min(m, min_eig_herm(zk));
    return m;
  }

  bool in_halfplane(double margin = 0.0) const {
    return halfplane_margin() > margin;
  }

  bool in_disk(double margin = 0.0) const {
    for (const CMatrix& zk : Z)
      if (operator_norm(zk) >= 1.0 - margin) return false;
    return true;
  }

  bool in_omega() const;
};

// Searches the unit circle for lambda with lambda * Z in the halfplane
// product: 720-point grid on the phase followed by golden-section refinement.
inline std::optional<Complex> locate_omega_lambda(const MatrixPoint& z) {
  const auto margin_at = [&](double theta) {
    return z.scaled(std::polar(1.0, theta)).halfplane_margin();
  };
  constexpr int kGrid = 720;
  double best_theta = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kGrid; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / kGrid;
    const double v = margin_at(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  // Golden-section refinement on the bracketing interval.
  const double step = 2.0 * std::numbers::pi / kGrid;
  double lo = best_theta - step, hi = best_theta + step;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = margin_at(x1), f2 = margin_at(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = margin_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = margin_at(x1);
    }
  }
  const double theta = 0.5 * (lo + hi);
  if (margin_at(theta) > 1e-9) return std::polar(1.0, theta);
  if (best > 1e-9) return std::polar(1.0, best_theta);
  return std::nullopt;
}

inline bool MatrixPoint::in_omega() const {
  return locate_omega_lambda(*this).has_value();
}

// Tuple (R_1, ..., R_N) whose n_k x n_k entry blocks are d x d matrices drawn
// from a common commutative algebra.
struct OperatorTuple {
  std::vector<Index> n;
  Index d = 1;
  std::vector<CMatrix> R;

  OperatorTuple() = default;
  OperatorTuple(std::vector<Index> n_, Index d_, std::vector<CMatrix> r)
      : n(std::move(n_)), d(d_), R(std::move(r)) {
    if (R.size() != n.size() || d < 1)
      throw ShapeMismatch("OperatorTuple: inconsistent construction");
    for (std::size_t k = 0; k < n.size(); ++k)
      if (R[k].rows() != n[k] * d || R[k].cols() != n[k] * d)
        throw ShapeMismatch("OperatorTuple: component size mismatch");
  }

  // Scalar point amplified by the identity carrier: R_k = Z_k ⊗ I_d.
  static OperatorTuple from_point(const MatrixPoint& z, Index d) {
    std::vector<CMatrix> r;
    r.reserve(z.Z.size());
    for (const CMatrix& zk : z.Z) r.push_back(kron(zk, CMatrix::Identity(d, d)));
    return OperatorTuple(z.sizes(), d, std::move(r));
  }

  Index vars() const { return static_cast<Index>(n.size()); }

  CMatrix block(Index k, Index i, Index j) const {
    return R[static_cast<std::size_t>(k)].block(i * d, j * d, d, d);
  }

  // Largest relative commutator norm over all entry-block pairs.
  double commutation_defect() const {
    std::vector<CMatrix> blocks;
    for (Index k = 0; k < vars(); ++k)
      for (Index i = 0; i < n[static_cast<std::size_t>(k)]; ++i)
        for (Index j = 0; j < n[static_cast<std::size_t>(k)]; ++j)
          blocks.push_back(block(k, i, j));
    double worst = 0.0;
    for (std::size_t a = 0; a < blocks.size(); ++a)
      for (std::size_t b = a + 1; b < blocks.size(); ++b) {
        const double na = blocks[a].norm(), nb = blocks[b].norm();
        if (na == 0.0 || nb == 0.0) continue;
        const double c = (blocks[a] * blocks[b] - blocks[b] * blocks[a]).norm();
        worst = std::max(worst, c / (na * nb));
      }
    return worst;
  }

  void require_commuting(double tol = 1e-9) const {
    const double defect = commutation_defect();
    if (defect > tol)
      throw NotCommuting("OperatorTuple: entry blocks do not commute (defect " +
                         std::to_string(defect) + ")");
  }

  double accretivity_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const CMatrix& rk : R) m = std::min(m, min_eig_herm(rk));
    return m;
  }

  double max_norm() const {
    double m = 0.0;
    for (const CMatrix& rk : R) m = std::max(m, operator_norm(rk));
    return m;
  }
};

}  // namespace bess
