#pragma once

#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bess/cayley.hpp"
#include "bess/domain.hpp"
#include "bess/pencil.hpp"
#include "bess/report.hpp"
#include "bess/rng.hpp"
#include "bess/sampling.hpp"
#include "bess/types.hpp"

namespace bess {

struct SampleConfig {
  std::uint64_t seed = 42;
  int num_points = 20;
  int num_tuples = 100;
  Index carrier_dim = 4;       // tuple checks cycle d over {1, 2, 4} up to this
  double margin = 0.3;         // accretivity margin s for generated tuples
  double tol_identity = 1e-9;
  double tol_positivity = 1e-8;

  void validate() const {
    if (carrier_dim < 1 || margin <= 0.0 || num_points < 1 || num_tuples < 0)
      throw InvalidInput("SampleConfig: invalid configuration");
  }
};

// Function given only through point evaluations, for membership screening of
// candidates that do not carry a pencil.
struct PointFunction {
  std::vector<Index> n;
  Index u = 1;
  std::function<CMatrix(const MatrixPoint&)> eval;
};

namespace detail {

inline std::string describe_point(const MatrixPoint& z, std::size_t index) {
  std::ostringstream os;
  os << "sample " << index << ", Z = [";
  for (std::size_t k = 0; k < z.Z.size(); ++k) {
    if (k) os << "; ";
    os << z.Z[k].format(Eigen::IOFormat(9, 0, ",", ",", "", "", "[", "]"));
  }
  os << "]";
  return os.str();
}

template <typename Residual>
inline CheckResult sweep(const std::string& name, double threshold, int count,
                         Residual&& residual) {
  CheckResult c{name, 0.0, threshold, true, ""};
  for (int i = 0; i < count; ++i) {
    auto [r, witness] = residual(i);
    if (r > c.max_residual) {
      c.max_residual = r;
      if (r > threshold) c.witness = witness;
    }
  }
  c.pass = c.max_residual <= threshold;
  return c;
}

}  // namespace detail

// Checks (a) positive homogeneity, (b) homogeneity along unimodular
// rotations, (c) symmetry under componentwise adjoints. Pure point checks;
// applicable to opaque evaluators.
inline Report check_membership(const PointFunction& f, const SampleConfig& cfg) {
  cfg.validate();
  Report report;
  const Rng base(cfg.seed);

  report.add(detail::sweep(
      "positive-homogeneity", cfg.tol_identity, cfg.num_points, [&](int i) {
        Rng rng = base.stream(1, static_cast<std::uint64_t>(i));
        const MatrixPoint z = random_halfplane_point(f.n, rng);
        const double t = rng.uniform(0.1, 10.0);
        const CMatrix fz = f.eval(z);
        const double r = (f.eval(z.scaled(t)) - t * fz).norm() /
                         (t * (1.0 + fz.norm()));
        return std::pair{r, detail::describe_point(z, static_cast<std::size_t>(i)) +
                                ", t = " + std::to_string(t)};
      }));

  report.add(detail::sweep(
      "unimodular-homogeneity", cfg.tol_identity, cfg.num_points, [&](int i) {
        Rng rng = base.stream(2, static_cast<std::uint64_t>(i));
        const MatrixPoint z = random_halfplane_point(f.n, rng);
        const Complex lambda = rng.unimodular();
        const CMatrix fz = f.eval(z);
        const double r = (f.eval(z.scaled(lambda)) - lambda * fz).norm() /
                         (1.0 + fz.norm());
        return std::pair{r, detail::describe_point(z, static_cast<std::size_t>(i))};
      }));

  report.add(detail::sweep(
      "symmetry", cfg.tol_identity, cfg.num_points, [&](int i) {
        Rng rng = base.stream(3, static_cast<std::uint64_t>(i));
        const MatrixPoint z = random_halfplane_point(f.n, rng);
        const CMatrix fz = f.eval(z);
        const double r =
            (f.eval(z.adjoint()) - fz.adjoint()).norm() / (1.0 + fz.norm());
        return std::pair{r, detail::describe_point(z, static_cast<std::size_t>(i))};
      }));

  return report;
}

// Full membership screen for a pencil-backed function: the point checks, the
// operator positivity test over random commuting accretive tuples, and the
// residuals of the sum and difference decomposition identities.
inline Report check_membership(const BessFunction& f, const SampleConfig& cfg) {
  cfg.validate();
  PointFunction pf{f.shape().n, f.u(),
                   [&f](const MatrixPoint& z) { return eval_f(f, z); }};
  Report report = check_membership(pf, cfg);
  const Rng base(cfg.seed);
  const Shape& shape = f.shape();

  std::vector<Index> dims;
  for (Index d : {Index(1), Index(2), Index(4)})
    if (d <= cfg.carrier_dim) dims.push_back(d);
  if (dims.empty()) dims.push_back(1);

  report.add(detail::sweep(
      "operator-positivity", cfg.tol_positivity, cfg.num_tuples, [&](int i) {
        Rng rng = base.stream(4, static_cast<std::uint64_t>(i));
        const Index d = dims[static_cast<std::size_t>(i) % dims.size()];
        const OperatorTuple r =
            random_commuting_accretive_tuple(shape.n, d, cfg.margin, rng);
        const CMatrix value = eval_f_operator(f, r);
        const double slack = min_eig_herm(value) / (1.0 + operator_norm(value));
        return std::pair{std::max(0.0, -slack),
                         "tuple " + std::to_string(i) + ", d = " + std::to_string(d)};
      }));

  report.add(detail::sweep(
      "decomposition-sum", cfg.tol_identity, cfg.num_points, [&](int i) {
        Rng rng = base.stream(5, static_cast<std::uint64_t>(i));
        const MatrixPoint z = random_halfplane_point(shape.n, rng);
        const MatrixPoint l = random_halfplane_point(shape.n, rng);
        const auto pz = phi(f, z);
        const auto pl = phi(f, l);
        const CMatrix fz = eval_f(f, z);
        const CMatrix fl = eval_f(f, l);
        CMatrix sum = CMatrix::Zero(f.u(), f.u());
        for (Index k = 0; k < shape.vars(); ++k) {
          const Index mk = shape.m[static_cast<std::size_t>(k)];
          if (mk == 0) continue;
          sum += pl[static_cast<std::size_t>(k)].adjoint() *
                 kron(CMatrix(z.Z[static_cast<std::size_t>(k)] +
                              l.Z[static_cast<std::size_t>(k)].adjoint()),
                      CMatrix::Identity(mk, mk)) *
                 pz[static_cast<std::size_t>(k)];
        }
        const double r = (fz + fl.adjoint() - sum).norm() /
                         (1.0 + fz.norm() + fl.norm());
        return std::pair{r, detail::describe_point(z, static_cast<std::size_t>(i))};
      }));

  report.add(detail::sweep(
      "decomposition-difference", cfg.tol_identity, cfg.num_points, [&](int i) {
        Rng rng = base.stream(6, static_cast<std::uint64_t>(i));
        const MatrixPoint z = random_halfplane_point(shape.n, rng);
        const MatrixPoint l = random_halfplane_point(shape.n, rng);
        const auto pz = phi(f, z);
        const auto pl = phi(f, l);
        const CMatrix fz = eval_f(f, z);
        const CMatrix fl = eval_f(f, l);
        CMatrix sum = CMatrix::Zero(f.u(), f.u());
        for (Index k = 0; k < shape.vars(); ++k) {
          const Index mk = shape.m[static_cast<std::size_t>(k)];
          if (mk == 0) continue;
          sum += pl[static_cast<std::size_t>(k)].adjoint() *
                 kron(CMatrix(z.Z[static_cast<std::size_t>(k)] -
                              l.Z[static_cast<std::size_t>(k)].adjoint()),
                      CMatrix::Identity(mk, mk)) *
                 pz[static_cast<std::size_t>(k)];
        }
        const double r = (fz - fl.adjoint() - sum).norm() /
                         (1.0 + fz.norm() + fl.norm());
        return std::pair{r, detail::describe_point(z, static_cast<std::size_t>(i))};
      }));

  return report;
}

}  // namespace bess
