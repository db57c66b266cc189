#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "squashkit/linalg.hpp"

namespace squashkit {

enum class Basis { Z = 0, X = 1 };

// One of the four BB84 outcomes (r, b).
struct Label {
  Basis basis;
  int bit;

  friend bool operator==(const Label&, const Label&) = default;
};

inline constexpr std::array<Label, 4> kAllLabels{
    Label{Basis::Z, 0}, Label{Basis::Z, 1}, Label{Basis::X, 0}, Label{Basis::X, 1}};

std::string label_name(Label l);  // "z0", "z1", "x0", "x1"
Label parse_label(std::string_view name);
char basis_name(Basis r);

// Cyclic index c with L_{2b} = M_(z,b), L_{2b+1} = M_(x,b).
inline constexpr int cyclic_index(Label l) { return 2 * l.bit + (l.basis == Basis::X ? 1 : 0); }
inline constexpr Label label_from_cyclic(int c) {
  c = ((c % 4) + 4) % 4;
  return Label{(c % 2 == 1) ? Basis::X : Basis::Z, c / 2};
}

/// Four-element BB84 measurement on a d-dimensional input space.
class Bb84Povm {
 public:
  Bb84Povm() = default;
  // Elements ordered z0, z1, x0, x1.
  Bb84Povm(ComplexMatrix z0, ComplexMatrix z1, ComplexMatrix x0, ComplexMatrix x1);

  std::size_t dim() const noexcept { return dim_; }
  const ComplexMatrix& element(Label l) const;
  // L_c view used by the C4 machinery.
  const ComplexMatrix& cyclic_element(int c) const { return element(label_from_cyclic(c)); }

  // (I +- sigma_z)/2, (I +- sigma_x)/2
  static Bb84Povm ideal_qubit();

 private:
  std::size_t dim_ = 0;
  std::array<ComplexMatrix, 4> elements_;
};

struct ValidationReport {
  // Minimum eigenvalue per element (z0, z1, x0, x1); negative values are PSD violations.
  std::array<double, 4> psd_margin{};
  std::array<double, 4> hermiticity_residual{};
  // ||M_(r,0) + M_(r,1) - I||_F for r = z, x.
  std::array<double, 2> completeness_residual{};
  bool passed = false;
};

ValidationReport validate(const Bb84Povm& p, double tol = 1e-9);

struct Observable {
  Basis basis;
  ComplexMatrix matrix;
};

// M_r = M_(r,0) - M_(r,1). Throws InvalidPovm if p does not validate.
Observable observable(const Bb84Povm& p, Basis r, double tol = 1e-9);

// Throws NotAState unless rho is Hermitian, PSD (min eigenvalue >= -tol) and unit trace.
void require_density_matrix(const ComplexMatrix& rho, double tol = 1e-9);

// Tr(rho M_(r,b)), clamped into [0, 1] when within tol of the interval.
double outcome_probability(const ComplexMatrix& rho, const Bb84Povm& p, Basis r, int bit,
                           double tol = 1e-9);

}  // namespace squashkit
