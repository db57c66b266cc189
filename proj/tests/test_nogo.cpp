#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "squashkit/error.hpp"
#include "squashkit/finder.hpp"
#include "squashkit/fock.hpp"
#include "squashkit/nogo.hpp"
#include "test_util.hpp"

namespace squashkit {
namespace {

using testing::MatrixNear;

Bb84Povm noisy_qubit(double s) {
  const auto id = ComplexMatrix::identity(2);
  return Bb84Povm(0.5 * (id + s * pauli::z()), 0.5 * (id - s * pauli::z()), 0.5 * (id + s * pauli::x()),
                  0.5 * (id - s * pauli::x()));
}

TEST(Symmetrize, TrivialGroupKeepsPovm) {
  const auto p = build_detector(FockSector({2})).povm;
  const auto g = FiniteGroup::trivial();
  const auto s = symmetrize(p, g, LabelAction::identity(g));
  for (const auto l : kAllLabels) EXPECT_EQ(s.tilde.element(l), p.element(l));
  ASSERT_EQ(s.rep.size(), 1u);
  EXPECT_EQ(s.rep[0], ComplexMatrix::identity(3));
}

TEST(Symmetrize, BlockDiagonalLayoutIsExact) {
  const auto p = counterexample_m0();
  const auto g = FiniteGroup::cyclic(4);
  const auto action = LabelAction::canonical_c4(g);
  const auto s = symmetrize(p, g, action);
  const std::size_t n = 4;
  ASSERT_EQ(s.tilde.dim(), 8u);
  for (const auto l : kAllLabels) {
    ComplexMatrix expected(8);
    for (std::size_t h = 0; h < n; ++h) {
      // g^-1 in C4 is (4 - g) mod 4; it sends L_c to L_{c - g}.
      const Label src = label_from_cyclic((cyclic_index(l) + 4 - static_cast<int>(h)) % 4);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) expected(a * n + h, b * n + h) = p.element(src)(a, b);
    }
    EXPECT_EQ(s.tilde.element(l), expected) << label_name(l);
  }
}

TEST(Symmetrize, SatisfiesDefinition2) {
  const auto c4 = FiniteGroup::cyclic(4);
  const auto m0 = symmetrize(counterexample_m0(), c4, LabelAction::canonical_c4(c4));
  EXPECT_TRUE(check_definition2(m0.rep, m0.action, m0.tilde).passed);
  EXPECT_TRUE(validate(m0.tilde).passed);

  const auto c2 = FiniteGroup::cyclic(2);
  const auto swap = symmetrize(Bb84Povm::ideal_qubit(), c2, LabelAction::basis_swap(c2));
  EXPECT_TRUE(check_definition2(swap.rep, swap.action, swap.tilde).passed);

  const auto s3 = FiniteGroup::s3();
  const auto triv = symmetrize(build_detector(FockSector({1, 1})).povm, s3, LabelAction::identity(s3));
  EXPECT_TRUE(check_definition2(triv.rep, triv.action, triv.tilde).passed);
}

TEST(Symmetrize, RejectsMismatchedAction) {
  const auto c4 = FiniteGroup::cyclic(4);
  EXPECT_THROW(symmetrize(counterexample_m0(), FiniteGroup::cyclic(2), LabelAction::canonical_c4(c4)), Error);
}

TEST(TraceIdentity, HoldsOnRandomStates) {
  const auto c4 = FiniteGroup::cyclic(4);
  for (const auto& p : {counterexample_m0(), build_detector(FockSector({2})).povm}) {
    const auto s = symmetrize(p, c4, LabelAction::canonical_c4(c4));
    const auto report = verify_trace_identity(s, 50, 3);
    EXPECT_EQ(report.samples, 50);
    EXPECT_LE(report.max_deviation, 1e-12);
  }
}

TEST(RelabelingUnitary, DihedralPermutations) {
  const auto ideal = Bb84Povm::ideal_qubit();
  int found = 0;
  for (int j = 0; j < 4; ++j) {
    for (bool reflect : {false, true}) {
      LabelPermutation perm{};
      for (int c = 0; c < 4; ++c) perm[c] = reflect ? ((j - c) % 4 + 4) % 4 : (c + j) % 4;
      const auto w = qubit_relabeling_unitary(perm);
      ASSERT_TRUE(w.has_value());
      EXPECT_LE(unitarity_residual(*w), 1e-12);
      for (int c = 0; c < 4; ++c) {
        EXPECT_TRUE(MatrixNear(conjugate(*w, ideal.cyclic_element(c)), ideal.cyclic_element(perm[c]), 1e-12));
      }
      ++found;
    }
  }
  EXPECT_EQ(found, 8);
  // Swapping z0 and x0 while fixing z1 is not realizable.
  EXPECT_FALSE(qubit_relabeling_unitary({1, 0, 2, 3}).has_value());
}

TEST(Pullback, TrivialGroup) {
  const auto model = build_detector(FockSector({2}));
  const auto f = construct_theorem1(model.povm, sector_symmetry(model));
  const auto g = FiniteGroup::trivial();
  const auto s = symmetrize(model.povm, g, LabelAction::identity(g));
  const auto back = pullback_squash(s, f);
  EXPECT_TRUE(MatrixNear(choi_from_squash(back).j, choi_from_squash(f).j, 1e-15));
}

TEST(Pullback, BlockwiseTwoPhotonC4) {
  const auto model = build_detector(FockSector({2}));
  const auto f = construct_theorem1(model.povm, sector_symmetry(model));
  const auto c4 = FiniteGroup::cyclic(4);
  const auto s = symmetrize(model.povm, c4, LabelAction::canonical_c4(c4));
  const auto tilde = blockwise_tilde_squash(s, f);
  ASSERT_TRUE(tilde.has_value());
  EXPECT_LE(verify_squash(*tilde, s.tilde).max_residual(), 1e-8);
  const auto back = pullback_squash(s, *tilde);
  EXPECT_LE(verify_squash(back, model.povm).max_residual(), 1e-8);
}

TEST(Pullback, FinderProducedTildeSquash) {
  const auto c4 = FiniteGroup::cyclic(4);
  const auto s = symmetrize(Bb84Povm::ideal_qubit(), c4, LabelAction::canonical_c4(c4));
  const auto report = find_squash(s.tilde);
  ASSERT_EQ(report.verdict, Verdict::Feasible);
  const auto back = pullback_squash(s, *report.squash, kFeasibleVerifyTol);
  EXPECT_LE(verify_squash(back, Bb84Povm::ideal_qubit()).max_residual(), 1e-6);
}

TEST(Pullback, RejectsUnverifiedTilde) {
  const auto c4 = FiniteGroup::cyclic(4);
  const auto s = symmetrize(Bb84Povm::ideal_qubit(), c4, LabelAction::canonical_c4(c4));
  for (const auto& bad : {complete_trace_preserving({}, 8), complete_trace_preserving({}, 2)}) {
    try {
      pullback_squash(s, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::TildeNotVerified);
    }
  }
}

TEST(CounterexampleM0, Properties) {
  const auto m0 = counterexample_m0();
  EXPECT_TRUE(validate(m0).passed);
  EXPECT_TRUE(MatrixNear(observable(m0, Basis::Z).matrix, pauli::z(), 0.0));
  EXPECT_TRUE(MatrixNear(observable(m0, Basis::X).matrix, pauli::z(), 0.0));
  EXPECT_EQ(find_squash(m0).verdict, Verdict::Infeasible);
}

TEST(Attack, CounterexampleGivesPerfectEve) {
  const auto r = bbm92_attack(counterexample_m0(), 10000, 7);
  EXPECT_EQ(r.trials, 10000);
  EXPECT_EQ(r.qber, 0.0);
  EXPECT_EQ(r.eve_accuracy, 1.0);
  EXPECT_EQ(r.analytic_qber, 0.0);
  EXPECT_EQ(r.analytic_eve_accuracy, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(Attack, NoisyBobMatchesAnalytic) {
  // Bob flips with probability (1 - 0.6)/2 = 0.2.
  const auto r = bbm92_attack(noisy_qubit(0.6), 20000, 11);
  EXPECT_NEAR(r.analytic_qber, 0.2, 1e-12);
  EXPECT_NEAR(r.qber, 0.2, 0.015);
  EXPECT_EQ(r.eve_accuracy, 1.0);
}

TEST(Attack, SeedDeterminismAndEdgeCases) {
  const auto p = noisy_qubit(0.3);
  const auto a = bbm92_attack(p, 500, 99);
  const auto b = bbm92_attack(p, 500, 99);
  EXPECT_EQ(a.qber, b.qber);
  const auto none = bbm92_attack(p, 0, 1);
  EXPECT_TRUE(none.degenerate);
  EXPECT_EQ(none.qber, 0.0);
  EXPECT_EQ(none.eve_accuracy, 1.0);
  EXPECT_THROW(bbm92_attack(build_detector(FockSector({2})).povm, 10, 1), Error);
}

}  // namespace
}  // namespace squashkit
