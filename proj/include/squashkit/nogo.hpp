#pragma once

#include <cstdint>
#include <optional>

#include "squashkit/group.hpp"
#include "squashkit/povm.hpp"
#include "squashkit/squash.hpp"

namespace squashkit {

/// A BB84 POVM made G-symmetric by attaching a group-labelled ancilla:
/// tilde_(r,b) = sum_g M_{g^-1 (r,b)} (x) |g><g|, with V(g) = I (x) R(g).
struct SymmetrizedPovm {
  Bb84Povm base;
  FiniteGroup group;
  LabelAction action;
  Bb84Povm tilde;
  Representation rep;
};

SymmetrizedPovm symmetrize(const Bb84Povm& p, const FiniteGroup& group, const LabelAction& action);

struct TraceIdentityReport {
  int samples = 0;
  // max_r,rho |Tr(M_r rho) - Tr(tilde_r (rho (x) |e><e|))|
  double max_deviation = 0.0;
};

TraceIdentityReport verify_trace_identity(const SymmetrizedPovm& s, int samples, std::uint64_t seed = 1);

inline constexpr double kPullbackTildeTol = 1e-8;

// rho -> F~(rho (x) |e><e|), with Kraus operators F~_c (I (x) |e>).
// Throws TildeNotVerified unless f_tilde verifies against s.tilde at tilde_tol.
SquashMap pullback_squash(const SymmetrizedPovm& s, const SquashMap& f_tilde, double tilde_tol = kPullbackTildeTol);

// Qubit unitary W with W Pi_L W^dagger = Pi_{g(L)} for the ideal BB84 projectors,
// chosen among the eight rotations preserving the z-x plane of the Bloch sphere.
std::optional<ComplexMatrix> qubit_relabeling_unitary(const LabelPermutation& perm);

// Block g of F~ is the base squash followed by the relabeling unitary for g;
// empty when some group element has no such unitary.
std::optional<SquashMap> blockwise_tilde_squash(const SymmetrizedPovm& s, const SquashMap& base_squash);

// The two-dimensional POVM with M_z = M_x = sigma_z.
Bb84Povm counterexample_m0();

struct AttackResult {
  double qber = 0.0;
  double eve_accuracy = 1.0;
  int trials = 0;
  double analytic_qber = 0.0;
  double analytic_eve_accuracy = 1.0;
  bool degenerate = false;
};

/// Eve sends |b_z>_A (x) |b_z>_B with b uniform; Alice measures the ideal
/// z basis and Bob measures p in its z basis. Outcomes are sampled from
/// std::mt19937_64(seed), two draws per trial plus one for Eve's bit.
AttackResult bbm92_attack(const Bb84Povm& p, int trials, std::uint64_t seed);

}  // namespace squashkit
