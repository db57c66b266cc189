#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "squashkit/linalg.hpp"
#include "squashkit/povm.hpp"

namespace squashkit {

/// Finite group given by its Cayley table: cayley[g][h] is the index of g*h.
/// The constructor verifies the Latin-square, identity and associativity
/// axioms and throws InvalidGroup otherwise.
class FiniteGroup {
 public:
  FiniteGroup(std::vector<std::vector<int>> cayley, int identity);

  static FiniteGroup trivial() { return cyclic(1); }
  static FiniteGroup cyclic(int n);
  // S3 with elements ordered e, (12), (13), (23), (123), (132).
  static FiniteGroup s3();

  int order() const noexcept { return static_cast<int>(cayley_.size()); }
  int identity() const noexcept { return identity_; }
  int multiply(int g, int h) const { return cayley_.at(g).at(h); }
  // Row search in the Cayley table.
  int inverse(int g) const;
  const std::vector<std::vector<int>>& cayley() const noexcept { return cayley_; }

 private:
  std::vector<std::vector<int>> cayley_;
  int identity_;
};

// Permutation of the cyclic label indices (L_0..L_3 = z0, x0, z1, x1):
// element g sends L_c to L_{perm[g][c]}.
using LabelPermutation = std::array<int, 4>;

class LabelAction {
 public:
  // Throws InvalidAction unless every entry is a permutation, the identity maps
  // to the identity permutation, and perm(gh) = perm(g) o perm(h).
  LabelAction(const FiniteGroup& group, std::vector<LabelPermutation> perms);

  static LabelAction identity(const FiniteGroup& group);
  // Element j of C_n (n divisible by 4) acts as c -> c + j: the 4-cycle
  // (z,0) -> (x,0) -> (z,1) -> (x,1).
  static LabelAction canonical_c4(const FiniteGroup& cyclic_group);
  // C_2 swapping (z,b) <-> (x,b).
  static LabelAction basis_swap(const FiniteGroup& c2);

  Label apply(int g, Label l) const;
  const std::vector<LabelPermutation>& perms() const noexcept { return perms_; }

 private:
  std::vector<LabelPermutation> perms_;
};

using Representation = std::vector<ComplexMatrix>;

struct C4Symmetry {
  ComplexMatrix unitary;
  int k = 1;
};

// Throws NotUnitary / NotCyclic when the C4Symmetry invariants fail.
void require_c4_symmetry(const C4Symmetry& sym);

struct SymmetryResidual {
  std::string relation;
  double value = 0.0;
};

struct SymmetryReport {
  std::vector<SymmetryResidual> residuals;
  double max_residual = 0.0;
  bool passed = false;
  bool phase_normalized = false;
};

SymmetryReport check_definition1(const C4Symmetry& sym, const Bb84Povm& p, double tol = 1e-9);

// Rescales U by a principal fourth root of 1/eta when U^4 = eta * I, giving k = 1.
C4Symmetry phase_normalize(const C4Symmetry& sym);

// P_c = 1/4 sum_j i^{-cj} U^j, c = 0..3. Requires k = 1 and U^4 = I.
std::array<ComplexMatrix, 4> c4_eigenprojectors(const C4Symmetry& sym);

// R(g)|h> = |gh>
Representation regular_representation(const FiniteGroup& group);

SymmetryReport check_definition2(const Representation& rep, const LabelAction& action, const Bb84Povm& p,
                                 double tol = 1e-9);

}  // namespace squashkit
