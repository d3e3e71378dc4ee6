#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "bess/domain.hpp"
#include "bess/numkit.hpp"
#include "bess/pencil.hpp"
#include "bess/types.hpp"

namespace bess {

// Per-variable Cayley transforms between the matrix halfplane and the matrix
// disk. Quotients are written numerator-left, (X)(Y)^{-1}, throughout.

inline MatrixPoint point_to_disk(const MatrixPoint& z) {
  std::vector<CMatrix> w;
  w.reserve(z.Z.size());
  for (const CMatrix& zk : z.Z) {
    const CMatrix id = CMatrix::Identity(zk.rows(), zk.cols());
    w.push_back(solve_right(zk - id, zk + id, "point_to_disk"));
  }
  return MatrixPoint(std::move(w));
}

inline MatrixPoint point_to_halfplane(const MatrixPoint& w) {
  std::vector<CMatrix> z;
  z.reserve(w.Z.size());
  for (const CMatrix& wk : w.Z) {
    const CMatrix id = CMatrix::Identity(wk.rows(), wk.cols());
    z.push_back(solve_right(id + wk, id - wk, "point_to_halfplane"));
  }
  return MatrixPoint(std::move(z));
}

// R_k = (I + T_k)(I - T_k)^{-1}: strict contractions to accretive tuples.
inline OperatorTuple tuple_to_accretive(const OperatorTuple& t) {
  std::vector<CMatrix> r;
  r.reserve(t.R.size());
  for (const CMatrix& tk : t.R) {
    const CMatrix id = CMatrix::Identity(tk.rows(), tk.cols());
    r.push_back(solve_right(id + tk, id - tk, "tuple_to_accretive"));
  }
  return OperatorTuple(t.n, t.d, std::move(r));
}

// T_k = (R_k - I)(R_k + I)^{-1}: strictly accretive tuples to contractions.
inline OperatorTuple tuple_to_contractive(const OperatorTuple& r) {
  std::vector<CMatrix> t;
  t.reserve(r.R.size());
  for (const CMatrix& rk : r.R) {
    const CMatrix id = CMatrix::Identity(rk.rows(), rk.cols());
    t.push_back(solve_right(rk - id, rk + id, "tuple_to_contractive"));
  }
  return OperatorTuple(r.n, r.d, std::move(t));
}

// Holomorphic function on the matrix-disk product, contractive at tuples of
// commuting strict contractions. Backed by whichever construction produced
// it (double Cayley transform of a pencil function, or a transfer function).
class SchurAglerEvaluator {
 public:
  SchurAglerEvaluator() = default;
  SchurAglerEvaluator(std::vector<Index> n, Index u,
                      std::function<CMatrix(const MatrixPoint&)> fn)
      : n_(std::move(n)), u_(u), fn_(std::move(fn)) {}

  const std::vector<Index>& var_sizes() const { return n_; }
  Index u() const { return u_; }

  CMatrix eval(const MatrixPoint& w) const {
    if (!w.matches(n_)) throw ShapeMismatch("SchurAglerEvaluator: point shape mismatch");
    return fn_(w);
  }

 private:
  std::vector<Index> n_;
  Index u_ = 0;
  std::function<CMatrix(const MatrixPoint&)> fn_;
};

// Function on the halfplane product obtained from a disk-side function by the
// inverse double Cayley transform.
class HalfplaneEvaluator {
 public:
  HalfplaneEvaluator() = default;
  HalfplaneEvaluator(std::vector<Index> n, Index u,
                     std::function<CMatrix(const MatrixPoint&)> fn)
      : n_(std::move(n)), u_(u), fn_(std::move(fn)) {}

  const std::vector<Index>& var_sizes() const { return n_; }
  Index u() const { return u_; }

  CMatrix eval(const MatrixPoint& z) const {
    if (!z.matches(n_)) throw ShapeMismatch("HalfplaneEvaluator: point shape mismatch");
    return fn_(z);
  }

 private:
  std::vector<Index> n_;
  Index u_ = 0;
  std::function<CMatrix(const MatrixPoint&)> fn_;
};

// F(W) = (f(Z(W)) - I)(f(Z(W)) + I)^{-1} with Z_k(W) = (I + W_k)(I - W_k)^{-1}.
// The inverted factor has real part >= I on the open domain.
inline SchurAglerEvaluator double_cayley(const BessFunction& f) {
  return SchurAglerEvaluator(
      f.shape().n, f.u(), [f](const MatrixPoint& w) {
        const CMatrix value = eval_f(f, point_to_halfplane(w));
        const CMatrix id = CMatrix::Identity(value.rows(), value.cols());
        return CMatrix(solve_right(value - id, value + id, "double_cayley"));
      });
}

// f(Z) = (I + F(W(Z)))(I - F(W(Z)))^{-1} with W_k(Z) = (Z_k - I)(Z_k + I)^{-1}.
// Requires 1 outside the spectrum of F on the evaluation domain.
inline HalfplaneEvaluator inverse_double_cayley(const SchurAglerEvaluator& f) {
  return HalfplaneEvaluator(
      f.var_sizes(), f.u(), [f](const MatrixPoint& z) {
        const CMatrix value = f.eval(point_to_disk(z));
        const CMatrix id = CMatrix::Identity(value.rows(), value.cols());
        if (condition_number(id - value) > kSingularCond)
          throw SpectrumAtOne("inverse_double_cayley: 1 in the spectrum of F");
        return CMatrix(solve_right(id + value, id - value, "inverse_double_cayley"));
      });
}

}  // namespace bess
