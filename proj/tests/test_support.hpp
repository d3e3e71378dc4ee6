#pragma once

#include <vector>

#include "bess/bess.hpp"

namespace bess::testing {

inline CMatrix cm(std::initializer_list<std::initializer_list<Complex>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.begin()->size());
  CMatrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const Complex& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline CMatrix scalar(Complex v) { return (CMatrix(1, 1) << v).finished(); }

inline MatrixPoint scalar_point(std::initializer_list<Complex> zs) {
  std::vector<CMatrix> z;
  for (Complex v : zs) z.push_back(scalar(v));
  return MatrixPoint(std::move(z));
}

// The worked two-variable example: G1 = [1, 1], G2 = [0, 1], u = h = 1, whose
// Schur complement is z1 z2 / (z1 + z2) (two resistors in parallel).
inline BessFunction parallel_resistor() {
  Shape shape{{1, 1}, {1, 1}, 1, 1};
  std::vector<CMatrix> g{cm({{1.0, 1.0}}), cm({{0.0, 1.0}})};
  return BessFunction(PsdPencil(shape, std::move(g)));
}

inline Complex parallel_resistor_value(Complex z1, Complex z2) {
  return z1 * z2 / (z1 + z2);
}

// The identity function f(Z) = Z as a pencil: one variable, m = 1, h = 0.
inline BessFunction identity_function(Index n) {
  Shape shape{{n}, {1}, n, 0};
  std::vector<CMatrix> g{CMatrix::Identity(n, n)};
  return BessFunction(PsdPencil(shape, std::move(g)));
}

// Random pencil with moderate conditioning: factors are complex gaussians.
inline BessFunction random_pencil(const std::vector<Index>& n,
                                  const std::vector<Index>& m, Index u, Index h,
                                  Rng& rng) {
  Shape shape{n, m, u, h};
  std::vector<CMatrix> g;
  for (std::size_t k = 0; k < n.size(); ++k)
    g.push_back(rng.cmatrix(n[k] * m[k], u + h));
  return BessFunction(PsdPencil(std::move(shape), std::move(g)));
}

// Real-entried variant, for the real-structure pipeline.
inline BessFunction random_real_pencil(const std::vector<Index>& n,
                                       const std::vector<Index>& m, Index u,
                                       Index h, Rng& rng) {
  Shape shape{n, m, u, h};
  std::vector<CMatrix> g;
  for (std::size_t k = 0; k < n.size(); ++k) {
    CMatrix gk(n[k] * m[k], u + h);
    for (Index i = 0; i < gk.rows(); ++i)
      for (Index j = 0; j < gk.cols(); ++j) gk(i, j) = rng.normal();
    g.push_back(std::move(gk));
  }
  return BessFunction(PsdPencil(std::move(shape), std::move(g)));
}

inline std::vector<MatrixPoint> disk_grid(const std::vector<Index>& n, int count,
                                          Rng& rng, bool with_zero = true) {
  std::vector<MatrixPoint> pts;
  if (with_zero) pts.push_back(MatrixPoint::zero(n));
  for (int i = 0; i < count; ++i) pts.push_back(random_disk_point(n, rng, 0.05, 0.8));
  return pts;
}

}  // namespace bess::testing
