#include "squashkit/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "squashkit/error.hpp"

namespace squashkit {

namespace {

constexpr double kUnitaryTol = 1e-9;
constexpr double kCyclicTol = 1e-8;
constexpr double kScalarTol = 1e-8;
constexpr double kBranchSnap = 1e-9;

bool is_permutation(const std::vector<int>& row, int n) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : row) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

Complex i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> cayley, int identity)
    : cayley_(std::move(cayley)), identity_(identity) {
  const int n = static_cast<int>(cayley_.size());
  if (n == 0) throw Error(ErrorCode::InvalidGroup, "empty Cayley table");
  if (identity_ < 0 || identity_ >= n) throw Error(ErrorCode::InvalidGroup, "identity index out of range");
  for (const auto& row : cayley_) {
    if (static_cast<int>(row.size()) != n || !is_permutation(row, n)) {
      throw Error(ErrorCode::InvalidGroup, "Cayley table rows must be permutations");
    }
  }
  for (int c = 0; c < n; ++c) {
    std::vector<int> column;
    column.reserve(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) column.push_back(cayley_[r][c]);
    if (!is_permutation(column, n)) throw Error(ErrorCode::InvalidGroup, "Cayley table columns must be permutations");
  }
  for (int g = 0; g < n; ++g) {
    if (multiply(identity_, g) != g || multiply(g, identity_) != g) {
      throw Error(ErrorCode::InvalidGroup, "identity element is not neutral");
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c))) {
          std::ostringstream msg;
          msg << "associativity fails for (" << a << ", " << b << ", " << c << ")";
          throw Error(ErrorCode::InvalidGroup, msg.str());
        }
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidGroup, "cyclic group order must be positive");
  std::vector<std::vector<int>> table(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) table[g][h] = (g + h) % n;
  return FiniteGroup(std::move(table), 0);
}

FiniteGroup FiniteGroup::s3() {
  using Perm = std::array<int, 3>;
  const std::array<Perm, 6> elements{Perm{0, 1, 2}, Perm{1, 0, 2}, Perm{2, 1, 0},
                                     Perm{0, 2, 1}, Perm{1, 2, 0}, Perm{2, 0, 1}};
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int g = 0; g < 6; ++g)
    for (int h = 0; h < 6; ++h) {
      Perm gh{};
      for (int i = 0; i < 3; ++i) gh[i] = elements[g][elements[h][i]];
      table[g][h] = static_cast<int>(std::find(elements.begin(), elements.end(), gh) - elements.begin());
    }
  return FiniteGroup(std::move(table), 0);
}

int FiniteGroup::inverse(int g) const {
  const auto& row = cayley_.at(static_cast<std::size_t>(g));
  return static_cast<int>(std::find(row.begin(), row.end(), identity_) - row.begin());
}

LabelAction::LabelAction(const FiniteGroup& group, std::vector<LabelPermutation> perms) : perms_(std::move(perms)) {
  if (static_cast<int>(perms_.size()) != group.order()) {
    throw Error(ErrorCode::InvalidAction, "one label permutation per group element is required");
  }
  for (const auto& p : perms_) {
    if (!is_permutation(std::vector<int>(p.begin(), p.end()), 4)) {
      throw Error(ErrorCode::InvalidAction, "label map is not a permutation of the four labels");
    }
  }
  if (perms_[static_cast<std::size_t>(group.identity())] != LabelPermutation{0, 1, 2, 3}) {
    throw Error(ErrorCode::InvalidAction, "identity element must act trivially");
  }
  for (int g = 0; g < group.order(); ++g)
    for (int h = 0; h < group.order(); ++h) {
      const auto& pgh = perms_[static_cast<std::size_t>(group.multiply(g, h))];
      for (int c = 0; c < 4; ++c) {
        if (pgh[c] != perms_[g][perms_[h][c]]) {
          throw Error(ErrorCode::InvalidAction, "label action is not a homomorphism");
        }
      }
    }
}

LabelAction LabelAction::identity(const FiniteGroup& group) {
  return LabelAction(group, std::vector<LabelPermutation>(static_cast<std::size_t>(group.order()), {0, 1, 2, 3}));
}

LabelAction LabelAction::canonical_c4(const FiniteGroup& cyclic_group) {
  std::vector<LabelPermutation> perms;
  for (int g = 0; g < cyclic_group.order(); ++g) {
    // Element g of the built-in cyclic table is the g-th power of the generator.
    perms.push_back({g % 4, (g + 1) % 4, (g + 2) % 4, (g + 3) % 4});
  }
  return LabelAction(cyclic_group, std::move(perms));
}

LabelAction LabelAction::basis_swap(const FiniteGroup& c2) {
  std::vector<LabelPermutation> perms(2);
  perms[static_cast<std::size_t>(c2.identity())] = {0, 1, 2, 3};
  perms[static_cast<std::size_t>(1 - c2.identity())] = {1, 0, 3, 2};
  return LabelAction(c2, std::move(perms));
}

Label LabelAction::apply(int g, Label l) const {
  return label_from_cyclic(perms_.at(static_cast<std::size_t>(g))[cyclic_index(l)]);
}

void require_c4_symmetry(const C4Symmetry& sym) {
  if (!sym.unitary.is_square() || sym.unitary.empty()) throw Error(ErrorCode::NotUnitary, "U must be square");
  if (unitarity_residual(sym.unitary) > kUnitaryTol) throw Error(ErrorCode::NotUnitary, "||U^dagger U - I||_F > 1e-9");
  if (sym.k < 1) throw Error(ErrorCode::NotCyclic, "k must be positive");
  const auto power = matrix_power(sym.unitary, static_cast<unsigned>(4 * sym.k));
  if (distance(power, ComplexMatrix::identity(sym.unitary.dim())) > kCyclicTol) {
    throw Error(ErrorCode::NotCyclic, "U^{4k} differs from I");
  }
}

SymmetryReport check_definition1(const C4Symmetry& sym, const Bb84Povm& p, double tol) {
  if (!sym.unitary.is_square() || sym.unitary.rows() != p.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "U and POVM dimensions differ");
  }
  const auto& u = sym.unitary;
  const auto u2 = u * u;
  SymmetryReport report;
  auto record = [&](std::string relation, double value) {
    report.max_residual = std::max(report.max_residual, value);
    report.residuals.push_back({std::move(relation), value});
  };
  for (int b = 0; b < 2; ++b) {
    record("U M_z" + std::to_string(b) + " U^dagger = M_x" + std::to_string(b),
           distance(conjugate(u, p.element({Basis::Z, b})), p.element({Basis::X, b})));
  }
  for (const Label l : kAllLabels) {
    const Label flipped{l.basis, 1 - l.bit};
    record("U^2 M_" + label_name(l) + " U^dagger2 = M_" + label_name(flipped),
           distance(conjugate(u2, p.element(l)), p.element(flipped)));
  }
  report.passed = report.max_residual <= tol;
  return report;
}

C4Symmetry phase_normalize(const C4Symmetry& sym) {
  if (!sym.unitary.is_square() || unitarity_residual(sym.unitary) > kUnitaryTol) {
    throw Error(ErrorCode::NotUnitary, "phase_normalize requires a unitary U");
  }
  const std::size_t d = sym.unitary.dim();
  const auto u4 = matrix_power(sym.unitary, 4);
  const Complex eta = u4.trace() / static_cast<double>(d);
  if (distance(u4, eta * ComplexMatrix::identity(d)) > kScalarTol || std::abs(eta) == 0.0) return sym;
  // Principal fourth root of 1/eta, with arg(1/eta) in (-pi, pi]. Rounding can
  // put eta = -1 on either side of the branch cut, so snap to +pi.
  double angle = std::arg(std::conj(eta));
  if (angle <= -std::numbers::pi + kBranchSnap) angle += 2.0 * std::numbers::pi;
  const Complex root = std::polar(std::pow(std::abs(eta), -0.25), angle / 4.0);
  return C4Symmetry{root * sym.unitary, 1};
}

std::array<ComplexMatrix, 4> c4_eigenprojectors(const C4Symmetry& sym) {
  if (sym.k != 1) throw Error(ErrorCode::KNotOne, "eigenprojectors need k = 1 (after phase_normalize)");
  const std::size_t d = sym.unitary.dim();
  std::array<ComplexMatrix, 4> powers{ComplexMatrix::identity(d), sym.unitary, {}, {}};
  powers[2] = powers[1] * sym.unitary;
  powers[3] = powers[2] * sym.unitary;
  if (distance(powers[3] * sym.unitary, ComplexMatrix::identity(d)) > kCyclicTol) {
    throw Error(ErrorCode::KNotOne, "U^4 differs from I");
  }
  std::array<ComplexMatrix, 4> projectors;
  for (int c = 0; c < 4; ++c) {
    ComplexMatrix p(d);
    for (int j = 0; j < 4; ++j) p += i_power(-c * j) * powers[j];
    projectors[c] = 0.25 * p;
  }
  return projectors;
}

Representation regular_representation(const FiniteGroup& group) {
  const auto n = static_cast<std::size_t>(group.order());
  Representation rep;
  rep.reserve(n);
  for (int g = 0; g < group.order(); ++g) {
    ComplexMatrix r(n);
    for (int h = 0; h < group.order(); ++h) r(static_cast<std::size_t>(group.multiply(g, h)), h) = 1.0;
    rep.push_back(std::move(r));
  }
  return rep;
}

SymmetryReport check_definition2(const Representation& rep, const LabelAction& action, const Bb84Povm& p,
                                 double tol) {
  if (rep.size() != action.perms().size()) {
    throw Error(ErrorCode::DimensionMismatch, "representation and label action cover different groups");
  }
  SymmetryReport report;
  for (std::size_t g = 0; g < rep.size(); ++g) {
    if (!rep[g].is_square() || rep[g].rows() != p.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "representation dimension differs from POVM dimension");
    }
    for (const Label l : kAllLabels) {
      const Label image = action.apply(static_cast<int>(g), l);
      const double value = distance(conjugate(rep[g], p.element(l)), p.element(image));
      report.max_residual = std::max(report.max_residual, value);
      report.residuals.push_back({"V(" + std::to_string(g) + ") M_" + label_name(l) + " V^dagger = M_" +
                                      label_name(image),
                                  value});
    }
  }
  report.passed = report.max_residual <= tol;
  return report;
}

}  // namespace squashkit
