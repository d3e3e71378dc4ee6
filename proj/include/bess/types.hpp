#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bess {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Linear solves refuse blocks whose condition number exceeds this; inside the
// open domains every inverted block is provably well conditioned, so hitting
// the limit signals an out-of-domain input rather than a numerical accident.
inline constexpr double kSingularCond = 1e12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};
struct SingularBlock : Error {
  using Error::Error;
};
struct NotPsd : Error {
  using Error::Error;
};
struct DefectMismatch : Error {
  using Error::Error;
};
struct NotCommuting : Error {
  using Error::Error;
};
struct InconsistentSamples : Error {
  using Error::Error;
};
struct MissingBasePoint : Error {
  using Error::Error;
};
struct IdentityViolated : Error {
  using Error::Error;
};
struct IsometryDefect : Error {
  using Error::Error;
};
struct SpectrumAtOne : Error {
  using Error::Error;
};
struct NotSelfAdjoint : Error {
  using Error::Error;
};
struct NotRealFunction : Error {
  using Error::Error;
};
struct NotInvariant : Error {
  using Error::Error;
};
struct NotInvolution : Error {
  using Error::Error;
};
struct InvalidInput : Error {
  using Error::Error;
};

inline CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

inline CMatrix hermitian_part(const CMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

}  // namespace bess
