#pragma once

#include <vector>

#include "bess/cayley.hpp"
#include "bess/domain.hpp"
#include "bess/rng.hpp"
#include "bess/types.hpp"

namespace bess {

// Random point of the halfplane product with accretivity margin at least
// `margin`, by shifting a complex gaussian sample along the identity.
inline MatrixPoint random_halfplane_point(const std::vector<Index>& n, Rng& rng,
                                          double margin = 0.1) {
  std::vector<CMatrix> z;
  z.reserve(n.size());
  for (Index nk : n) {
    CMatrix zk = rng.cmatrix(nk, nk);
    const double me = min_eig_herm(zk);
    if (me < margin) zk += (margin - me) * CMatrix::Identity(nk, nk);
    z.push_back(std::move(zk));
  }
  return MatrixPoint(std::move(z));
}

// Random point of the disk product with operator norms in [lo, hi].
inline MatrixPoint random_disk_point(const std::vector<Index>& n, Rng& rng,
                                     double lo = 0.05, double hi = 0.85) {
  std::vector<CMatrix> w;
  w.reserve(n.size());
  for (Index nk : n) {
    CMatrix wk = rng.cmatrix(nk, nk);
    const double nrm = operator_norm(wk);
    const double target = rng.uniform(lo, hi);
    if (nrm > 0.0) wk *= target / nrm;
    w.push_back(std::move(wk));
  }
  return MatrixPoint(std::move(w));
}

namespace detail {

// Entry blocks are polynomials of degree <= 3 in one shared generator, hence
// commute exactly.
inline CMatrix random_algebra_element(const std::vector<CMatrix>& generator_powers,
                                      Rng& rng) {
  const Index d = generator_powers.front().rows();
  CMatrix e = CMatrix::Zero(d, d);
  for (std::size_t p = 0; p < generator_powers.size(); ++p)
    e += rng.cgauss() * generator_powers[p];
  return e;
}

}  // namespace detail

// Tuple over a commutative algebra with R_k + R_k^* >= s I, built from
// polynomials in one random generator and shifted to the requested margin.
inline OperatorTuple random_commuting_accretive_tuple(const std::vector<Index>& n,
                                                      Index d, double s, Rng& rng) {
  CMatrix t0 = rng.cmatrix(d, d);
  if (d > 1) t0 /= std::sqrt(static_cast<double>(d));
  std::vector<CMatrix> powers{CMatrix::Identity(d, d)};
  for (int p = 1; p <= 3; ++p) powers.push_back(powers.back() * t0);

  std::vector<CMatrix> r;
  r.reserve(n.size());
  for (Index nk : n) {
    CMatrix rk(nk * d, nk * d);
    for (Index i = 0; i < nk; ++i)
      for (Index j = 0; j < nk; ++j)
        rk.block(i * d, j * d, d, d) = detail::random_algebra_element(powers, rng);
    const double me = min_eig_herm(rk);
    if (me < s) rk += (s - me) * CMatrix::Identity(nk * d, nk * d);
    r.push_back(std::move(rk));
  }
  return OperatorTuple(n, d, std::move(r));
}

// Cayley-inverse of a random strictly accretive tuple; every component has
// operator norm strictly below one.
inline OperatorTuple random_commuting_contraction_tuple(const std::vector<Index>& n,
                                                        Index d, Rng& rng) {
  return tuple_to_contractive(random_commuting_accretive_tuple(n, d, 0.5, rng));
}

}  // namespace bess
