#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "squashkit/error.hpp"
#include "squashkit/fock.hpp"
#include "squashkit/group.hpp"
#include "squashkit/nogo.hpp"
#include "test_util.hpp"

namespace squashkit {
namespace {

using testing::MatrixNear;

const ComplexMatrix& rotation45() {
  // exp(-i pi/4 sigma_y) sends sigma_z to sigma_x.
  static const ComplexMatrix u = unitary_from_generator(pauli::y(), -std::numbers::pi / 4);
  return u;
}

Complex i_pow(int e) { return std::pow(kI, ((e % 4) + 4) % 4); }

TEST(FiniteGroup, BuiltIns) {
  EXPECT_EQ(FiniteGroup::trivial().order(), 1);
  const auto c4 = FiniteGroup::cyclic(4);
  EXPECT_EQ(c4.multiply(3, 2), 1);
  EXPECT_EQ(c4.inverse(1), 3);
  const auto s3 = FiniteGroup::s3();
  EXPECT_EQ(s3.order(), 6);
  for (int g = 0; g < 6; ++g) EXPECT_EQ(s3.multiply(g, s3.inverse(g)), s3.identity());
  // S3 is not abelian.
  EXPECT_NE(s3.multiply(1, 2), s3.multiply(2, 1));
}

TEST(FiniteGroup, RejectsNonLatinSquare) {
  EXPECT_THROW(FiniteGroup({{0, 1}, {1, 1}}, 0), Error);
}

TEST(FiniteGroup, RejectsNonNeutralIdentity) {
  try {
    FiniteGroup({{1, 0}, {0, 1}}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGroup);
  }
}

TEST(FiniteGroup, RejectsNonAssociativeLoop) {
  // Smallest non-associative loop: Latin square with identity 0.
  try {
    FiniteGroup({{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGroup);
  }
}

TEST(LabelAction, Validation) {
  EXPECT_NO_THROW(LabelAction::canonical_c4(FiniteGroup::cyclic(4)));
  EXPECT_NO_THROW(LabelAction::canonical_c4(FiniteGroup::cyclic(8)));
  EXPECT_THROW(LabelAction::canonical_c4(FiniteGroup::cyclic(3)), Error);
  const auto c4 = FiniteGroup::cyclic(4);
  // Factors through C2, so this one is a homomorphism.
  EXPECT_NO_THROW(LabelAction(c4, {{0, 1, 2, 3}, {1, 0, 2, 3}, {0, 1, 2, 3}, {1, 0, 2, 3}}));
  EXPECT_THROW(LabelAction(c4, {{0, 1, 2, 3}, {1, 0, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}}), Error);
  EXPECT_THROW(LabelAction(c4, {{0, 1, 2, 3}, {1, 1, 2, 3}, {0, 1, 2, 3}, {1, 0, 2, 3}}), Error);
  const auto action = LabelAction::canonical_c4(c4);
  EXPECT_EQ(action.apply(1, {Basis::Z, 0}), (Label{Basis::X, 0}));
  EXPECT_EQ(action.apply(1, {Basis::X, 0}), (Label{Basis::Z, 1}));
  EXPECT_EQ(action.apply(1, {Basis::X, 1}), (Label{Basis::Z, 0}));
}

TEST(CheckDefinition1, AllHalfWithIdentity) {
  const auto half = 0.5 * ComplexMatrix::identity(3);
  const Bb84Povm p(half, half, half, half);
  EXPECT_TRUE(check_definition1({ComplexMatrix::identity(3), 1}, p).passed);
}

TEST(CheckDefinition1, IdealQubitWithFortyFiveDegreeRotation) {
  const auto report = check_definition1({rotation45(), 2}, Bb84Povm::ideal_qubit());
  EXPECT_TRUE(report.passed) << report.max_residual;
  EXPECT_EQ(report.residuals.size(), 6u);
}

TEST(CheckDefinition1, OppositeRotationFailsFirstRelation) {
  const auto u = unitary_from_generator(pauli::y(), std::numbers::pi / 4);
  EXPECT_FALSE(check_definition1({u, 2}, Bb84Povm::ideal_qubit()).passed);
}

// For M0 the relations U P0 U^dagger = P0 and U^2 P0 U^dagger2 = P1 pull in
// opposite directions; over all U the largest residual is at least 1/sqrt(2).
TEST(CheckDefinition1, CounterexampleFailsForEveryUnitaryOnGrid) {
  const auto m0 = counterexample_m0();
  const int steps = 25;
  double smallest = 1e9;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b < steps; ++b)
      for (int c = 0; c < steps; ++c) {
        const double ta = -std::numbers::pi + 2 * std::numbers::pi * a / steps;
        const double tb = -std::numbers::pi + 2 * std::numbers::pi * b / steps;
        const double tc = -std::numbers::pi + 2 * std::numbers::pi * c / steps;
        const auto gen = ta * pauli::x() + tb * pauli::y() + tc * pauli::z();
        const auto report = check_definition1({unitary_from_generator(gen, 1.0), 1}, m0);
        EXPECT_FALSE(report.passed);
        smallest = std::min(smallest, report.max_residual);
      }
  EXPECT_GE(smallest, 1.0 / std::sqrt(2.0) - 1e-9);
}

TEST(PhaseNormalize, AlreadyOrderFour) {
  const auto u = ComplexMatrix::diagonal(Vector{1.0, kI, -1.0});
  const auto out = phase_normalize({u, 1});
  EXPECT_EQ(out.k, 1);
  EXPECT_TRUE(MatrixNear(out.unitary, u, 0.0));
}

TEST(PhaseNormalize, FortyFiveDegreeRotation) {
  const auto out = phase_normalize({rotation45(), 2});
  EXPECT_EQ(out.k, 1);
  EXPECT_TRUE(MatrixNear(matrix_power(out.unitary, 4), ComplexMatrix::identity(2), 1e-10));
}

TEST(PhaseNormalize, OddPhotonSector) {
  const auto model = build_detector(FockSector({3}));
  EXPECT_TRUE(MatrixNear(matrix_power(model.u_n, 4), -1.0 * ComplexMatrix::identity(4), 1e-9));
  const auto out = phase_normalize({model.u_n, 2});
  EXPECT_EQ(out.k, 1);
  EXPECT_TRUE(MatrixNear(matrix_power(out.unitary, 4), ComplexMatrix::identity(4), 1e-9));
}

TEST(PhaseNormalize, NonScalarFourthPowerUnchanged) {
  const auto u = ComplexMatrix::diagonal(Vector{1.0, std::polar(1.0, std::numbers::pi / 4)});
  const auto out = phase_normalize({u, 2});
  EXPECT_EQ(out.k, 2);
  EXPECT_TRUE(MatrixNear(out.unitary, u, 0.0));
}

TEST(PhaseNormalize, RejectsNonUnitary) {
  try {
    phase_normalize({2.0 * ComplexMatrix::identity(2), 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitary);
  }
}

TEST(PhaseNormalize, ResidualsUnchanged) {
  std::mt19937_64 rng(4);
  for (const auto& sector : enumerate_sectors(1, 2, 3)) {
    const auto model = build_detector(sector);
    const C4Symmetry sym{model.u_n, sector.total_photons() % 2 == 0 ? 1 : 2};
    const auto before = check_definition1(sym, model.povm);
    const auto after = check_definition1(phase_normalize(sym), model.povm);
    for (std::size_t i = 0; i < before.residuals.size(); ++i) {
      EXPECT_NEAR(before.residuals[i].value, after.residuals[i].value, 1e-12);
    }
  }
  // Random unitaries with U^4 = eta I.
  for (int trial = 0; trial < 10; ++trial) {
    const auto v = testing::random_unitary(4, rng);
    const Complex eta = std::polar(1.0, 0.3 + trial);
    const Complex root = std::pow(eta, 0.25);
    const auto u = v * ComplexMatrix::diagonal(Vector{root, kI * root, -root, root}) * v.adjoint();
    const auto p = build_detector(FockSector({1, 1})).povm;
    const auto before = check_definition1({u, 2}, p, 1e9);
    const auto after = check_definition1(phase_normalize({u, 2}), p, 1e9);
    EXPECT_EQ(phase_normalize({u, 2}).k, 1);
    for (std::size_t i = 0; i < before.residuals.size(); ++i) {
      EXPECT_NEAR(before.residuals[i].value, after.residuals[i].value, 1e-10);
    }
  }
}

TEST(C4Eigenprojectors, Identity) {
  const auto p = c4_eigenprojectors({ComplexMatrix::identity(3), 1});
  EXPECT_TRUE(MatrixNear(p[0], ComplexMatrix::identity(3), 1e-15));
  for (int c = 1; c < 4; ++c) EXPECT_TRUE(MatrixNear(p[c], ComplexMatrix(3), 1e-15));
}

TEST(C4Eigenprojectors, DiagonalUnitary) {
  const auto p = c4_eigenprojectors({ComplexMatrix::diagonal(Vector{1.0, kI, -1.0, -kI}), 1});
  for (int c = 0; c < 4; ++c) {
    EXPECT_TRUE(MatrixNear(p[c], ComplexMatrix::projector(basis_vector(4, static_cast<std::size_t>(c))), 1e-15));
  }
}

TEST(C4Eigenprojectors, RandomConstruction) {
  std::mt19937_64 rng(17);
  const std::vector<int> charges{0, 2, 1, 1, 3, 0, 2};
  const auto v = testing::random_unitary(charges.size(), rng);
  Vector diag;
  for (int c : charges) diag.push_back(i_pow(c));
  const C4Symmetry sym{v * ComplexMatrix::diagonal(diag) * v.adjoint(), 1};
  const auto p = c4_eigenprojectors(sym);
  ComplexMatrix sum(charges.size());
  for (int c = 0; c < 4; ++c) {
    ComplexMatrix expected(charges.size());
    for (std::size_t j = 0; j < charges.size(); ++j)
      if (charges[j] == c) expected += ComplexMatrix::projector(v.column(j));
    EXPECT_TRUE(MatrixNear(p[c], expected, 1e-9));
    EXPECT_TRUE(MatrixNear(p[c] * p[c], p[c], 1e-9));
    EXPECT_TRUE(MatrixNear(sym.unitary * p[c], i_pow(c) * p[c], 1e-9));
    for (int c2 = 0; c2 < 4; ++c2) {
      if (c2 == c) continue;
      EXPECT_TRUE(MatrixNear(p[c] * p[c2], ComplexMatrix(charges.size()), 1e-9));
    }
    sum += p[c];
  }
  EXPECT_TRUE(MatrixNear(sum, ComplexMatrix::identity(charges.size()), 1e-9));
}

TEST(C4Eigenprojectors, RequiresKOne) {
  try {
    c4_eigenprojectors({rotation45(), 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KNotOne);
  }
}

TEST(RegularRepresentation, C2AndC4) {
  const auto c2 = regular_representation(FiniteGroup::cyclic(2));
  EXPECT_TRUE(MatrixNear(c2[1], pauli::x(), 0.0));
  const auto c4 = regular_representation(FiniteGroup::cyclic(4));
  ComplexMatrix shift(4);
  for (std::size_t h = 0; h < 4; ++h) shift((h + 1) % 4, h) = 1.0;
  EXPECT_EQ(c4[1], shift);
  EXPECT_EQ(c4[0], ComplexMatrix::identity(4));
}

TEST(RegularRepresentation, S3HomomorphismIsExact) {
  const auto g = FiniteGroup::s3();
  const auto rep = regular_representation(g);
  for (int a = 0; a < g.order(); ++a) {
    for (const auto& z : rep[a].entries()) EXPECT_TRUE(z == Complex(0.0) || z == Complex(1.0));
    for (int b = 0; b < g.order(); ++b) EXPECT_EQ(rep[a] * rep[b], rep[g.multiply(a, b)]);
  }
}

TEST(CheckDefinition2, TrivialGroupPasses) {
  const auto g = FiniteGroup::trivial();
  const auto p = build_detector(FockSector({2})).povm;
  EXPECT_TRUE(check_definition2({ComplexMatrix::identity(3)}, LabelAction::identity(g), p).passed);
}

TEST(CheckDefinition2, IdentityRepCannotPermuteElements) {
  const auto g = FiniteGroup::cyclic(4);
  const Representation rep(4, ComplexMatrix::identity(2));
  EXPECT_FALSE(check_definition2(rep, LabelAction::canonical_c4(g), Bb84Povm::ideal_qubit()).passed);
}

TEST(CheckDefinition2, C4RotationRepresentationPasses) {
  const auto g = FiniteGroup::cyclic(4);
  // V(g) = R^g with phases chosen so that V is a genuine representation of C4.
  const auto r = phase_normalize({rotation45(), 2}).unitary;
  Representation rep{ComplexMatrix::identity(2), r, r * r, r * r * r};
  EXPECT_TRUE(check_definition2(rep, LabelAction::canonical_c4(g), Bb84Povm::ideal_qubit()).passed);
}

}  // namespace
}  // namespace squashkit
