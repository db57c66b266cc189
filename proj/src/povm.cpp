#include "squashkit/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "squashkit/error.hpp"

namespace squashkit {

namespace {

std::size_t slot(Label l) { return static_cast<std::size_t>(l.basis) * 2 + static_cast<std::size_t>(l.bit); }

}  // namespace

std::string label_name(Label l) {
  return std::string(1, basis_name(l.basis)) + static_cast<char>('0' + l.bit);
}

char basis_name(Basis r) { return r == Basis::Z ? 'z' : 'x'; }

Label parse_label(std::string_view name) {
  for (const Label l : kAllLabels) {
    if (label_name(l) == name) return l;
  }
  throw Error(ErrorCode::ParseError, "unknown label '" + std::string(name) + "'");
}

Bb84Povm::Bb84Povm(ComplexMatrix z0, ComplexMatrix z1, ComplexMatrix x0, ComplexMatrix x1)
    : dim_(z0.rows()), elements_{std::move(z0), std::move(z1), std::move(x0), std::move(x1)} {
  for (const auto& m : elements_) {
    if (!m.is_square() || m.rows() != dim_ || dim_ == 0) {
      throw Error(ErrorCode::DimensionMismatch, "POVM elements must share one square shape");
    }
  }
}

const ComplexMatrix& Bb84Povm::element(Label l) const {
  if (l.bit != 0 && l.bit != 1) throw Error(ErrorCode::InvalidPovm, "bit must be 0 or 1");
  return elements_[slot(l)];
}

Bb84Povm Bb84Povm::ideal_qubit() {
  const auto id = ComplexMatrix::identity(2);
  return Bb84Povm(0.5 * (id + pauli::z()), 0.5 * (id - pauli::z()), 0.5 * (id + pauli::x()),
                  0.5 * (id - pauli::x()));
}

ValidationReport validate(const Bb84Povm& p, double tol) {
  ValidationReport report;
  bool ok = true;
  for (const Label l : kAllLabels) {
    const auto& m = p.element(l);
    const std::size_t i = slot(l);
    report.hermiticity_residual[i] = hermiticity_residual(m);
    if (report.hermiticity_residual[i] > tol) {
      ok = false;
      report.psd_margin[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    report.psd_margin[i] = min_eigenvalue(hermitian_part(m), tol);
    ok = ok && report.psd_margin[i] >= -tol;
  }
  const auto id = ComplexMatrix::identity(p.dim());
  for (const Basis r : {Basis::Z, Basis::X}) {
    const double res = distance(p.element({r, 0}) + p.element({r, 1}), id);
    report.completeness_residual[static_cast<std::size_t>(r)] = res;
    ok = ok && res <= tol;
  }
  report.passed = ok;
  return report;
}

Observable observable(const Bb84Povm& p, Basis r, double tol) {
  if (!validate(p, tol).passed) throw Error(ErrorCode::InvalidPovm, "POVM failed validation");
  return Observable{r, p.element({r, 0}) - p.element({r, 1})};
}

void require_density_matrix(const ComplexMatrix& rho, double tol) {
  if (!rho.is_square()) throw Error(ErrorCode::NotAState, "state is not square");
  if (hermiticity_residual(rho) > tol) throw Error(ErrorCode::NotAState, "state is not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0}) > tol) throw Error(ErrorCode::NotAState, "trace differs from 1");
  if (min_eigenvalue(hermitian_part(rho)) < -tol) throw Error(ErrorCode::NotAState, "state is not PSD");
}

double outcome_probability(const ComplexMatrix& rho, const Bb84Povm& p, Basis r, int bit, double tol) {
  if (!rho.is_square() || rho.rows() != p.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state and POVM dimensions differ");
  }
  require_density_matrix(rho, tol);
  const double prob = (rho * p.element({r, bit})).trace().real();
  if (prob < 0.0 && prob >= -tol) return 0.0;
  if (prob > 1.0 && prob <= 1.0 + tol) return 1.0;
  return prob;
}

}  // namespace squashkit
