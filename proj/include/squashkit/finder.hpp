#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "squashkit/linalg.hpp"
#include "squashkit/povm.hpp"
#include "squashkit/squash.hpp"

namespace squashkit {

/// Choi matrix J = sum_c vec(F_c) vec(F_c)^dagger on output (x) input, where
/// vec stacks the rows of a 2 x d Kraus operator so that entry (a, j) lands at
/// composite index a * d + j. A CPTP map has J >= 0 and Tr_out J = I_d.
struct ChoiMatrix {
  std::size_t in_dim = 0;
  ComplexMatrix j;
};

ChoiMatrix choi_from_squash(const SquashMap& f);

// Throws NotPsd (min eigenvalue < -1e-8) or NotTracePreserving (||Tr_out J - I||_F > 1e-6).
SquashMap squash_from_choi(const ChoiMatrix& c);

// F^dagger(X) evaluated from the Choi matrix: (Tr_out[(X (x) I) J])^T.
ComplexMatrix adjoint_from_choi(const ChoiMatrix& c, const ComplexMatrix& x);

/// Affine constraints F^dagger(I) = I, F^dagger(sigma_z) = M_z and
/// F^dagger(sigma_x) = M_x, written as real linear functionals of a Hermitian
/// Choi matrix and orthonormalized under the Hilbert-Schmidt inner product.
class ChoiConstraints {
 public:
  explicit ChoiConstraints(const Bb84Povm& p);

  std::size_t in_dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return basis_.size(); }

  // Orthogonal projection onto the affine set.
  ComplexMatrix project(const ComplexMatrix& j) const;
  // Largest Frobenius violation among the three operator equations.
  double residual(const ChoiMatrix& c) const;

 private:
  std::size_t dim_;
  ComplexMatrix m_z_;
  ComplexMatrix m_x_;
  std::vector<ComplexMatrix> basis_;
  std::vector<double> targets_;
};

// Eigenvalue clipping onto the PSD cone.
ComplexMatrix project_psd(const ComplexMatrix& j);

struct BlochWitness {
  double theta = 0.0;
  ComplexMatrix state;  // pure state maximizing <cos(theta) M_z + sin(theta) M_x>
  double value = 0.0;
};

/// Maximizes lambda_max(cos(theta) M_z + sin(theta) M_x) over a uniform theta
/// grid on [0, 2 pi) with one golden-section refinement around the best grid
/// point. A value above 1 certifies that no squash exists: the output Bloch
/// vector (Tr rho M_z, Tr rho M_x) would leave the unit disk.
BlochWitness bloch_witness(const ComplexMatrix& m_z, const ComplexMatrix& m_x, int grid = 720);

enum class Verdict { Feasible, Infeasible, Undecided };
std::string_view to_string(Verdict v);

struct FeasibilityReport {
  Verdict verdict = Verdict::Undecided;
  std::optional<SquashMap> squash;
  std::optional<BlochWitness> witness;
  std::optional<VerificationReport> verification;
  double gap = 0.0;
  int iterations = 0;
};

inline constexpr int kDefaultMaxIter = 20000;
inline constexpr double kDefaultGapTol = 1e-8;
inline constexpr double kFeasibleVerifyTol = 1e-6;
inline constexpr double kWitnessMargin = 1e-9;

/// Decides squash existence by averaged alternating projections between the
/// affine constraint set and the PSD cone, after a Bloch-norm witness check.
FeasibilityReport find_squash(const Bb84Povm& p, int max_iter = kDefaultMaxIter, double tol = kDefaultGapTol);

}  // namespace squashkit
