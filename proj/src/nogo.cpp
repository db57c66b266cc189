#include "squashkit/nogo.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "squashkit/error.hpp"
#include "squashkit/random.hpp"

namespace squashkit {

namespace {

constexpr double kRelabelTol = 1e-12;

// Uniform double in [0, 1) from the top 53 bits of one generator output.
double uniform53(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

SymmetrizedPovm symmetrize(const Bb84Povm& p, const FiniteGroup& group, const LabelAction& action) {
  if (static_cast<int>(action.perms().size()) != group.order()) {
    throw Error(ErrorCode::InvalidAction, "label action does not match the group order");
  }
  // Re-run the homomorphism check against this group.
  LabelAction checked(group, action.perms());

  const auto n = static_cast<std::size_t>(group.order());
  std::array<ComplexMatrix, 4> tilde;
  for (const Label l : kAllLabels) {
    ComplexMatrix acc(p.dim() * n);
    for (int g = 0; g < group.order(); ++g) {
      ComplexMatrix marker(n);
      marker(static_cast<std::size_t>(g), static_cast<std::size_t>(g)) = 1.0;
      acc += kron(p.element(checked.apply(group.inverse(g), l)), marker);
    }
    tilde[static_cast<std::size_t>(l.basis) * 2 + static_cast<std::size_t>(l.bit)] = std::move(acc);
  }

  Representation rep;
  const auto id = ComplexMatrix::identity(p.dim());
  for (const auto& r : regular_representation(group)) rep.push_back(kron(id, r));

  return SymmetrizedPovm{p, group, std::move(checked), Bb84Povm(tilde[0], tilde[1], tilde[2], tilde[3]),
                         std::move(rep)};
}

TraceIdentityReport verify_trace_identity(const SymmetrizedPovm& s, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t d = s.base.dim();
  const auto n = static_cast<std::size_t>(s.group.order());
  const auto anchor = ComplexMatrix::projector(basis_vector(n, static_cast<std::size_t>(s.group.identity())));

  TraceIdentityReport report;
  report.samples = samples;
  for (int k = 0; k < samples; ++k) {
    const auto rho = random_density_matrix(d, rng);
    const auto lifted = kron(rho, anchor);
    for (const Basis r : {Basis::Z, Basis::X}) {
      const auto m = s.base.element({r, 0}) - s.base.element({r, 1});
      const auto mt = s.tilde.element({r, 0}) - s.tilde.element({r, 1});
      const double dev = std::abs((m * rho).trace() - (mt * lifted).trace());
      report.max_deviation = std::max(report.max_deviation, dev);
    }
  }
  return report;
}

SquashMap pullback_squash(const SymmetrizedPovm& s, const SquashMap& f_tilde, double tilde_tol) {
  if (f_tilde.in_dim() != s.tilde.dim()) {
    throw Error(ErrorCode::TildeNotVerified, "squash input dimension differs from the symmetrized POVM");
  }
  const auto tilde_report = verify_squash(f_tilde, s.tilde, tilde_tol);
  if (!tilde_report.passed) {
    throw Error(ErrorCode::TildeNotVerified,
                "F~ fails verification against the symmetrized POVM, max residual " +
                    std::to_string(tilde_report.max_residual()));
  }
  const std::size_t d = s.base.dim();
  const auto n = static_cast<std::size_t>(s.group.order());
  const auto e = static_cast<std::size_t>(s.group.identity());
  std::vector<ComplexMatrix> kraus;
  for (const auto& f : f_tilde.kraus()) {
    ComplexMatrix restricted(2, d);
    for (std::size_t row = 0; row < 2; ++row)
      for (std::size_t a = 0; a < d; ++a) restricted(row, a) = f(row, a * n + e);
    kraus.push_back(std::move(restricted));
  }
  return SquashMap(d, std::move(kraus));
}

std::optional<ComplexMatrix> qubit_relabeling_unitary(const LabelPermutation& perm) {
  const auto ideal = Bb84Povm::ideal_qubit();
  // R sends L_c to L_{c+1}; sigma_x swaps z0 <-> z1 and fixes x0, x1.
  const auto rotation = unitary_from_generator(pauli::y(), -std::numbers::pi / 4.0);
  ComplexMatrix power = ComplexMatrix::identity(2);
  for (int j = 0; j < 4; ++j) {
    for (const auto& candidate : {power, power * pauli::x()}) {
      bool match = true;
      for (int c = 0; c < 4 && match; ++c) {
        match = distance(conjugate(candidate, ideal.cyclic_element(c)), ideal.cyclic_element(perm[c])) <= kRelabelTol;
      }
      if (match) return candidate;
    }
    power = rotation * power;
  }
  return std::nullopt;
}

std::optional<SquashMap> blockwise_tilde_squash(const SymmetrizedPovm& s, const SquashMap& base_squash) {
  const std::size_t d = s.base.dim();
  const auto n = static_cast<std::size_t>(s.group.order());
  std::vector<ComplexMatrix> kraus;
  for (int g = 0; g < s.group.order(); ++g) {
    const auto w = qubit_relabeling_unitary(s.action.perms()[static_cast<std::size_t>(g)]);
    if (!w) return std::nullopt;
    ComplexMatrix bra(1, n);
    bra(0, static_cast<std::size_t>(g)) = 1.0;
    for (const auto& f : base_squash.kraus()) kraus.push_back(kron(*w * f, bra));
  }
  return SquashMap(d * n, std::move(kraus));
}

Bb84Povm counterexample_m0() {
  const auto id = ComplexMatrix::identity(2);
  const auto up = 0.5 * (id + pauli::z());
  const auto down = 0.5 * (id - pauli::z());
  return Bb84Povm(up, down, up, down);
}

AttackResult bbm92_attack(const Bb84Povm& p, int trials, std::uint64_t seed) {
  if (p.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "the attack needs a qubit POVM for Bob");
  const auto alice = Bb84Povm::ideal_qubit();

  std::array<double, 2> alice_zero{};
  std::array<double, 2> bob_zero{};
  for (int b = 0; b < 2; ++b) {
    const auto psi = ComplexMatrix::projector(basis_vector(2, static_cast<std::size_t>(b)));
    alice_zero[b] = outcome_probability(psi, alice, Basis::Z, 0);
    bob_zero[b] = outcome_probability(psi, p, Basis::Z, 0);
  }

  AttackResult result;
  result.trials = std::max(trials, 0);
  result.analytic_qber = 0.0;
  result.analytic_eve_accuracy = 0.0;
  for (int b = 0; b < 2; ++b) {
    result.analytic_qber += 0.5 * (alice_zero[b] * (1.0 - bob_zero[b]) + (1.0 - alice_zero[b]) * bob_zero[b]);
    result.analytic_eve_accuracy += 0.5 * (b == 0 ? alice_zero[b] : 1.0 - alice_zero[b]);
  }

  if (result.trials == 0) {
    result.qber = 0.0;
    result.eve_accuracy = 1.0;
    result.degenerate = true;
    return result;
  }

  std::mt19937_64 rng(seed);
  long errors = 0;
  long known = 0;
  for (int t = 0; t < result.trials; ++t) {
    const int b = static_cast<int>(rng() >> 63);
    const int alice_bit = uniform53(rng) < alice_zero[b] ? 0 : 1;
    const int bob_bit = uniform53(rng) < bob_zero[b] ? 0 : 1;
    errors += alice_bit != bob_bit;
    known += alice_bit == b;
  }
  result.qber = static_cast<double>(errors) / result.trials;
  result.eve_accuracy = static_cast<double>(known) / result.trials;
  return result;
}

}  // namespace squashkit
