#include <gtest/gtest.h>

#include "bess/bess.hpp"
#include "test_support.hpp"

using namespace bess;
using namespace bess::testing;

TEST(ScalarCoefficients, FactorsReproduceCoefficients) {
  const std::vector<CMatrix> a{cm({{1.0, 1.0}, {1.0, 1.0}}),
                               cm({{0.0, 0.0}, {0.0, 1.0}})};
  const PsdPencil p = pencil_from_scalar_coefficients(a, 1);
  ASSERT_EQ(p.G.size(), 2u);
  EXPECT_EQ(p.shape.m[0], 1);
  EXPECT_EQ(p.shape.m[1], 1);
  for (std::size_t j = 0; j < a.size(); ++j)
    EXPECT_LE((p.G[j].adjoint() * p.G[j] - a[j]).norm(), 1e-12);
}

TEST(ScalarCoefficients, IdentityCoefficient) {
  const PsdPencil p = pencil_from_scalar_coefficients({identity(2)}, 2);
  ASSERT_EQ(p.G.size(), 1u);
  EXPECT_EQ(p.shape.m[0], 2);
  EXPECT_LE((p.G[0].adjoint() * p.G[0] - identity(2)).norm(), 1e-12);
}

TEST(ScalarCoefficients, RejectsIndefinite) {
  // Eigenvalues 3 and -1.
  EXPECT_THROW(pencil_from_scalar_coefficients({cm({{1.0, 2.0}, {2.0, 1.0}})}, 1),
               NotPsd);
}

TEST(EvalPencil, ParallelResistorAtOnes) {
  const BessFunction f = parallel_resistor();
  const CMatrix a = eval_pencil(f.pencil, scalar_point({1.0, 1.0}));
  EXPECT_LE((a - cm({{1.0, 1.0}, {1.0, 2.0}})).norm(), 1e-14);
}

TEST(EvalPencil, BasePointIsPsdAndZeroPointVanishes) {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    Rng r = rng.stream(1, trial);
    const BessFunction f = random_pencil({2, 1}, {1, 2}, 2, 1, r);
    const CMatrix ae = eval_pencil(f.pencil, MatrixPoint::identity(f.shape().n));
    EXPECT_GE(min_eig_herm(ae), -1e-10 * ae.norm());
    const CMatrix a0 = eval_pencil(f.pencil, MatrixPoint::zero(f.shape().n));
    EXPECT_LE(a0.norm(), 1e-14);
  }
}

TEST(EvalF, ParallelResistorClosedForm) {
  const BessFunction f = parallel_resistor();
  EXPECT_LE(std::abs(eval_f(f, scalar_point({1.0, 1.0}))(0, 0) - Complex(0.5)),
            1e-14);
  EXPECT_LE(std::abs(eval_f(f, scalar_point({2.0, 2.0}))(0, 0) - Complex(1.0)),
            1e-14);
  Rng rng(17);
  for (int i = 0; i < 25; ++i) {
    Rng r = rng.stream(2, i);
    const Complex z1 = Complex(r.uniform(0.1, 3.0), r.uniform(-2.0, 2.0));
    const Complex z2 = Complex(r.uniform(0.1, 3.0), r.uniform(-2.0, 2.0));
    const Complex got = eval_f(f, scalar_point({z1, z2}))(0, 0);
    const Complex want = parallel_resistor_value(z1, z2);
    EXPECT_LE(std::abs(got - want), 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST(EvalF, EmptyInternalBlockReturnsPencil) {
  Rng rng(9);
  const BessFunction f = random_pencil({2}, {2}, 3, 0, rng);
  const MatrixPoint z = random_halfplane_point(f.shape().n, rng);
  EXPECT_LE((eval_f(f, z) - eval_pencil(f.pencil, z)).norm(), 1e-14);
}

TEST(EvalF, PositiveRealPartOnHalfplane) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Rng r = rng.stream(3, trial);
    const BessFunction f = random_pencil({1, 2}, {2, 1}, 2, 2, r);
    const MatrixPoint z = random_halfplane_point(f.shape().n, r);
    const CMatrix v = eval_f(f, z);
    EXPECT_GE(min_eig_herm(v), -1e-9 * (1.0 + v.norm()));
  }
}

TEST(EvalF, HomogeneousAcrossOmega) {
  const BessFunction f = parallel_resistor();
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    Rng r = rng.stream(4, trial);
    const MatrixPoint z = random_halfplane_point(f.shape().n, r);
    const Complex lambda = r.unimodular();
    const CMatrix direct = eval_f(f, z);
    const CMatrix rotated = eval_f(f, z.scaled(lambda));
    EXPECT_LE((rotated - lambda * direct).norm(), 1e-9 * (1.0 + direct.norm()));
  }
  // A definite rotation away from the halfplane.
  const CMatrix at_minus = eval_f(f, scalar_point({-1.0, -1.0}));
  EXPECT_LE(std::abs(at_minus(0, 0) - Complex(-0.5)), 1e-10);
}

TEST(EvalF, SymmetryUnderAdjoints) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Rng r = rng.stream(5, trial);
    const BessFunction f = random_pencil({2, 1}, {1, 1}, 1, 2, r);
    const MatrixPoint z = random_halfplane_point(f.shape().n, r);
    EXPECT_LE((eval_f(f, z.adjoint()) - eval_f(f, z).adjoint()).norm(),
              1e-10 * (1.0 + eval_f(f, z).norm()));
  }
}

TEST(Phi, ParallelResistorHandValues) {
  const BessFunction f = parallel_resistor();
  const auto phis = phi(f, scalar_point({1.0, 1.0}));
  ASSERT_EQ(phis.size(), 2u);
  EXPECT_LE(std::abs(phis[0](0, 0) - Complex(0.5)), 1e-14);
  EXPECT_LE(std::abs(phis[1](0, 0) - Complex(-0.5)), 1e-14);
}

TEST(Phi, ConstantWhenInternalBlockEmpty) {
  Rng rng(41);
  const BessFunction f = random_pencil({1, 1}, {2, 1}, 2, 0, rng);
  const MatrixPoint z = random_halfplane_point(f.shape().n, rng);
  const auto phis = phi(f, z);
  for (std::size_t k = 0; k < phis.size(); ++k)
    EXPECT_LE((phis[k] - f.pencil.G[k]).norm(), 1e-14);
}

TEST(Phi, DegreeZeroHomogeneity) {
  Rng rng(43);
  const BessFunction f = random_pencil({2, 1}, {1, 2}, 1, 2, rng);
  const MatrixPoint z = random_halfplane_point(f.shape().n, rng);
  const auto p1 = phi(f, z);
  const auto p2 = phi(f, z.scaled(2.0));
  for (std::size_t k = 0; k < p1.size(); ++k)
    EXPECT_LE((p1[k] - p2[k]).norm(), 1e-10 * (1.0 + p1[k].norm()));
}

TEST(Phi, DecompositionIdentityProperty) {
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    Rng r = rng.stream(6, trial);
    const BessFunction f = random_pencil({1, 2, 1}, {1, 1, 2}, 2, 2, r);
    const MatrixPoint z = random_halfplane_point(f.shape().n, r);
    const MatrixPoint l = random_halfplane_point(f.shape().n, r);
    const auto pz = phi(f, z);
    const auto pl = phi(f, l);
    CMatrix sum = CMatrix::Zero(f.u(), f.u());
    for (Index k = 0; k < f.shape().vars(); ++k) {
      const Index mk = f.shape().m[k];
      sum += pl[k].adjoint() * kron(z.Z[k], identity(mk)) * pz[k];
    }
    const CMatrix fz = eval_f(f, z);
    EXPECT_LE((fz - sum).norm(), 1e-9 * (1.0 + fz.norm()));
  }
}

TEST(EvalFOperator, ScalarCarrierReducesToEvalF) {
  Rng rng(53);
  const BessFunction f = parallel_resistor();
  const MatrixPoint z = random_halfplane_point(f.shape().n, rng);
  const OperatorTuple r = OperatorTuple::from_point(z, 1);
  EXPECT_LE((eval_f_operator(f, r) - eval_f(f, z)).norm(), 1e-12);
}

TEST(EvalFOperator, ScalarEntriesAmplify) {
  Rng rng(59);
  for (int trial = 0; trial < 5; ++trial) {
    Rng r = rng.stream(7, trial);
    const BessFunction f = random_pencil({2, 1}, {1, 1}, 2, 1, r);
    const MatrixPoint z = random_halfplane_point(f.shape().n, r);
    const Index d = 3;
    const OperatorTuple rt = OperatorTuple::from_point(z, d);
    const CMatrix got = eval_f_operator(f, rt);
    const CMatrix want = kron(eval_f(f, z), identity(d));
    EXPECT_LE((got - want).norm(), 1e-10 * (1.0 + want.norm()));
  }
}

TEST(EvalFOperator, PositivityOnAccretiveTuples) {
  Rng rng(61);
  const BessFunction f = parallel_resistor();
  for (int trial = 0; trial < 20; ++trial) {
    Rng r = rng.stream(8, trial);
    const OperatorTuple rt =
        random_commuting_accretive_tuple(f.shape().n, 3, 0.3, r);
    const CMatrix v = eval_f_operator(f, rt);
    EXPECT_GE(min_eig_herm(v), -1e-8 * (1.0 + v.norm()));
  }
}

TEST(EvalFOperator, RejectsNonCommutingTuple) {
  const BessFunction f = identity_function(2);
  CMatrix r0 = CMatrix::Zero(4, 4);
  r0.block(0, 0, 2, 2) = 3.0 * identity(2);
  r0.block(2, 2, 2, 2) = 3.0 * identity(2);
  r0.block(0, 2, 2, 2) = cm({{0.0, 1.0}, {0.0, 0.0}});
  r0.block(2, 0, 2, 2) = cm({{0.0, 0.0}, {1.0, 0.0}});
  const OperatorTuple bad({2}, 2, {r0});
  EXPECT_THROW(eval_f_operator(f, bad), NotCommuting);
}

TEST(Reconstruct, RoundTripFromSampledPhi) {
  Rng rng(67);
  for (int trial = 0; trial < 5; ++trial) {
    Rng r = rng.stream(9, trial);
    const BessFunction f = random_pencil({1, 2}, {1, 1}, 1, 2, r);
    std::vector<PhiSample> samples;
    samples.push_back({MatrixPoint::identity(f.shape().n),
                       phi(f, MatrixPoint::identity(f.shape().n))});
    for (int i = 0; i < 10; ++i) {
      const MatrixPoint z = random_halfplane_point(f.shape().n, r);
      samples.push_back({z, phi(f, z)});
    }
    const BessFunction g = reconstruct_from_phi(samples, f.shape());
    for (int i = 0; i < 5; ++i) {
      const MatrixPoint z = random_halfplane_point(f.shape().n, r);
      const CMatrix want = eval_f(f, z);
      EXPECT_LE((eval_f(g, z) - want).norm(), 1e-7 * (1.0 + want.norm()));
    }
  }
}

TEST(Reconstruct, ConstantPhiGivesEmptyInternalSpace) {
  Rng rng(71);
  const BessFunction f = random_pencil({1, 1}, {1, 2}, 2, 0, rng);
  std::vector<PhiSample> samples;
  samples.push_back({MatrixPoint::identity(f.shape().n),
                     phi(f, MatrixPoint::identity(f.shape().n))});
  for (int i = 0; i < 4; ++i) {
    const MatrixPoint z = random_halfplane_point(f.shape().n, rng);
    samples.push_back({z, phi(f, z)});
  }
  const BessFunction g = reconstruct_from_phi(samples, f.shape());
  EXPECT_EQ(g.h(), 0);
}

TEST(Reconstruct, MissingBasePointThrows) {
  Rng rng(73);
  const BessFunction f = parallel_resistor();
  std::vector<PhiSample> samples;
  for (int i = 0; i < 4; ++i) {
    const MatrixPoint z = random_halfplane_point(f.shape().n, rng);
    samples.push_back({z, phi(f, z)});
  }
  EXPECT_THROW(reconstruct_from_phi(samples, f.shape()), MissingBasePoint);
}

TEST(Reconstruct, CorruptedSamplesRejected) {
  Rng rng(79);
  const BessFunction f = parallel_resistor();
  std::vector<PhiSample> samples;
  samples.push_back({MatrixPoint::identity(f.shape().n),
                     phi(f, MatrixPoint::identity(f.shape().n))});
  for (int i = 0; i < 5; ++i) {
    const MatrixPoint z = random_halfplane_point(f.shape().n, rng);
    auto phis = phi(f, z);
    if (i == 2) phis[0].array() += Complex(1e-2, 0.0);
    samples.push_back({z, std::move(phis)});
  }
  EXPECT_THROW(reconstruct_from_phi(samples, f.shape()), InconsistentSamples);
}

TEST(OmegaPredicate, KnownRotations) {
  const auto minus_e = scalar_point({-1.0, -1.0});
  const auto lm = locate_omega_lambda(minus_e);
  ASSERT_TRUE(lm.has_value());
  EXPECT_LE(std::abs(*lm - Complex(-1.0)), 1e-6);

  const auto rot = locate_omega_lambda(scalar_point({Complex(0, 1), Complex(0, 1)}));
  ASSERT_TRUE(rot.has_value());
  EXPECT_LE(std::abs(*rot - Complex(0, -1)), 1e-6);

  EXPECT_FALSE(scalar_point({1.0, -1.0}).in_omega());
}

TEST(MatrixPointPredicates, HalfplaneAndDisk) {
  EXPECT_TRUE(scalar_point({1.0, 2.0}).in_halfplane());
  EXPECT_FALSE(scalar_point({1.0, -0.5}).in_halfplane());
  EXPECT_TRUE(scalar_point({0.3, Complex(0.0, 0.5)}).in_disk());
  EXPECT_FALSE(scalar_point({1.2, 0.0}).in_disk());
}

TEST(OperatorTuple, GeneratedTuplesSatisfyInvariants) {
  Rng rng(83);
  for (int trial = 0; trial < 25; ++trial) {
    Rng r = rng.stream(10, trial);
    const OperatorTuple t =
        random_commuting_accretive_tuple({2, 1}, 1 + trial % 4, 0.25, r);
    EXPECT_LE(t.commutation_defect(), 1e-12);
    EXPECT_GE(t.accretivity_margin(), 0.25 - 1e-12);
  }
}
