#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "squashkit/group.hpp"
#include "squashkit/linalg.hpp"
#include "squashkit/povm.hpp"

namespace squashkit {

/// CPTP map from a d-dimensional input to a qubit, in operator-sum form.
/// Complete positivity is structural; trace preservation is checked by
/// verify_squash.
class SquashMap {
 public:
  SquashMap(std::size_t in_dim, std::vector<ComplexMatrix> kraus);

  std::size_t in_dim() const noexcept { return in_dim_; }
  static constexpr std::size_t out_dim() noexcept { return 2; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

  // F(rho) = sum_c F_c rho F_c^dagger
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  // F^dagger(X) = sum_c F_c^dagger X F_c
  ComplexMatrix apply_adjoint(const ComplexMatrix& x) const;

 private:
  std::size_t in_dim_;
  std::vector<ComplexMatrix> kraus_;
};

// sigma_y eigenvectors in the computational basis: |0_y> = (|0> + i|1>)/sqrt2, |1_y> = (|0> - i|1>)/sqrt2.
Vector y_basis_state(int bit);

struct Rank2Extraction {
  double lambda = 0.0;
  Vector v;
  // ||M_z - lambda (|v><v| - U^2|v><v|U^dagger2)||_F
  double residual = 0.0;
};

// Requires sym.k == 1. Throws RankNotTwo or SpectrumAsymmetric.
Rank2Extraction extract_rank2(const Observable& m_z, const C4Symmetry& sym, double tol = 1e-9);

struct MuDecomposition {
  double lambda = 0.0;
  Vector v;
  std::array<Vector, 4> v_c;  // empty when mu_c == 0
  std::array<double, 4> mu{};
  // <v|U^2|v>
  Complex orthogonality{};
};

// v_c = P_c v / ||P_c v|| with mu_c = ||P_c v|| >= 0. Throws SpectrumAsymmetric
// when <v|U^2|v> != 0 or the mu relations fail at tol.
MuDecomposition mu_decompose(const Vector& v, double lambda, const C4Symmetry& sym, double tol = 1e-9);

// F_c = sqrt(2 lambda) (mu_{c+1} |0_y><v_c| + mu_c |1_y><v_{c+1}|) for mu_c mu_{c+1} != 0.
std::vector<ComplexMatrix> kraus_core(const MuDecomposition& dec);

// Appends sqrt(d_j) |0_y><e_j| for the spectrum of I - sum F_c^dagger F_c.
SquashMap complete_trace_preserving(std::vector<ComplexMatrix> core, std::size_t dim);

/// Intermediate values of the analytic construction, kept for inspection.
struct Theorem1Trace {
  C4Symmetry normalized;
  Rank2Extraction rank2;
  MuDecomposition decomposition;
  std::vector<ComplexMatrix> core;
  SquashMap map;
};

/// Analytic construction for C4-symmetric POVMs whose M_z has rank two:
/// phase_normalize -> extract_rank2 -> mu_decompose -> kraus_core ->
/// complete_trace_preserving, followed by verify_squash at tol.
/// Errors are PipelineError values naming the failing stage.
Theorem1Trace construct_theorem1_traced(const Bb84Povm& p, const C4Symmetry& sym, double tol = 1e-9);
SquashMap construct_theorem1(const Bb84Povm& p, const C4Symmetry& sym, double tol = 1e-9);

// Identities used inside the construction, each evaluated independently.
struct ProofIdentities {
  double orthogonality = 0.0;     // |<v|U^2|v>|
  double mu_even = 0.0;           // |mu_0^2 + mu_2^2 - 1/2|
  double mu_odd = 0.0;            // |mu_1^2 + mu_3^2 - 1/2|
  double kraus_vs_orbit = 0.0;    // ||4 lambda sum mu_c mu_{c+1} |v_c><v_{c+1}| - lambda sum i^c U^c|v><v|U^dagger c||
  double orbit_vs_target = 0.0;   // ||lambda sum i^c U^c|v><v|U^dagger c - (M_z + i M_x)||
  double adjoint_vs_target = 0.0; // ||F^dagger(sigma_z + i sigma_x) - (M_z + i M_x)||
  double hc_reconstruction = 0.0; // ||F^dagger(sigma_z) - (F^dagger(sigma_z + i sigma_x) + H.c.)/2||
};

ProofIdentities proof_identities(const Bb84Povm& p, const Theorem1Trace& trace);

struct VerificationReport {
  double residual_z = 0.0;
  double residual_x = 0.0;
  double residual_tp = 0.0;
  // max |Tr(F(rho) sigma_r) - Tr(rho M_r)| over random states
  double spot_check = 0.0;
  int spot_samples = 0;
  bool passed = false;

  double max_residual() const;
};

inline constexpr std::uint64_t kSpotCheckSeed = 0x5eedc0de;

VerificationReport verify_squash(const SquashMap& f, const Bb84Povm& p, double tol = 1e-9, int spot_samples = 20);

}  // namespace squashkit
