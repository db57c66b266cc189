#include "squashkit/finder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "squashkit/error.hpp"

namespace squashkit {

namespace {

constexpr double kPsdFloor = -1e-8;
constexpr double kTpTol = 1e-6;
constexpr double kKrausCutoff = 1e-10;
constexpr double kDependentFunctional = 1e-12;

}  // namespace

ChoiMatrix choi_from_squash(const SquashMap& f) {
  const std::size_t n = 2 * f.in_dim();
  ChoiMatrix c{f.in_dim(), ComplexMatrix(n)};
  for (const auto& k : f.kraus()) {
    const auto v = k.entries();
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) c.j(p, q) += v[p] * std::conj(v[q]);
  }
  return c;
}

SquashMap squash_from_choi(const ChoiMatrix& c) {
  const std::size_t d = c.in_dim;
  if (!c.j.is_square() || c.j.rows() != 2 * d) throw Error(ErrorCode::DimensionMismatch, "Choi matrix must be 2d x 2d");
  const auto eig = hermitian_eig(c.j);
  if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < kPsdFloor) {
    throw Error(ErrorCode::NotPsd, "Choi matrix has a negative eigenvalue");
  }
  if (distance(partial_trace(c.j, 2, d, Keep::Second), ComplexMatrix::identity(d)) > kTpTol) {
    throw Error(ErrorCode::NotTracePreserving, "Tr_out J differs from the identity");
  }
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = eig.eigenvalues.size(); k-- > 0;) {
    const double lambda = eig.eigenvalues[k];
    if (lambda < kKrausCutoff) break;
    ComplexMatrix f(2, d, eig.eigenvectors.column(k));
    kraus.push_back(f * Complex(std::sqrt(lambda)));
  }
  return SquashMap(d, std::move(kraus));
}

ComplexMatrix adjoint_from_choi(const ChoiMatrix& c, const ComplexMatrix& x) {
  const std::size_t d = c.in_dim;
  const auto weighted = kron(x, ComplexMatrix::identity(d)) * c.j;
  return partial_trace(weighted, 2, d, Keep::Second).transpose();
}

ChoiConstraints::ChoiConstraints(const Bb84Povm& p)
    : dim_(p.dim()),
      m_z_(p.element({Basis::Z, 0}) - p.element({Basis::Z, 1})),
      m_x_(p.element({Basis::X, 0}) - p.element({Basis::X, 1})) {
  const std::size_t d = dim_;
  const std::array<ComplexMatrix, 3> outputs{ComplexMatrix::identity(2), pauli::z(), pauli::x()};
  const std::array<const ComplexMatrix*, 3> images{nullptr, &m_z_, &m_x_};
  const auto id = ComplexMatrix::identity(d);

  auto add = [&](ComplexMatrix h, double target) {
    // Modified Gram-Schmidt, two passes.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < basis_.size(); ++k) {
        const double coef = hs_inner(basis_[k], h);
        h -= basis_[k] * Complex(coef);
        target -= coef * targets_[k];
      }
    }
    const double n = h.frobenius_norm();
    if (n < kDependentFunctional) return;
    basis_.push_back(h * Complex(1.0 / n));
    targets_.push_back(target / n);
  };

  // Entry (j, j') of F^dagger(X) is Tr((X (x) |j><j'|) J).
  for (std::size_t x = 0; x < outputs.size(); ++x) {
    const ComplexMatrix& image = images[x] ? *images[x] : id;
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t jp = j; jp < d; ++jp) {
        ComplexMatrix e(d);
        e(j, jp) = 1.0;
        const auto k = kron(outputs[x], e);
        const auto k_dag = k.adjoint();
        add(0.5 * (k + k_dag), image(j, jp).real());
        if (jp != j) add(Complex(0.0, -0.5) * (k - k_dag), image(j, jp).imag());
      }
    }
  }
}

ComplexMatrix ChoiConstraints::project(const ComplexMatrix& j) const {
  ComplexMatrix out = j;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const double violation = hs_inner(basis_[k], j) - targets_[k];
    if (violation != 0.0) out -= basis_[k] * Complex(violation);
  }
  return out;
}

double ChoiConstraints::residual(const ChoiMatrix& c) const {
  const auto id = ComplexMatrix::identity(dim_);
  return std::max({distance(adjoint_from_choi(c, ComplexMatrix::identity(2)), id),
                   distance(adjoint_from_choi(c, pauli::z()), m_z_),
                   distance(adjoint_from_choi(c, pauli::x()), m_x_)});
}

ComplexMatrix project_psd(const ComplexMatrix& j) {
  const auto eig = hermitian_eig(hermitian_part(j));
  const std::size_t n = j.rows();
  ComplexMatrix scaled_vectors = eig.eigenvectors;
  for (std::size_t c = 0; c < n; ++c) {
    const double lambda = std::max(eig.eigenvalues[c], 0.0);
    for (std::size_t r = 0; r < n; ++r) scaled_vectors(r, c) *= lambda;
  }
  return hermitian_part(scaled_vectors * eig.eigenvectors.adjoint());
}

BlochWitness bloch_witness(const ComplexMatrix& m_z, const ComplexMatrix& m_x, int grid) {
  if (grid < 8) grid = 8;
  auto value_at = [&](double theta) { return max_eigenvalue(hermitian_part(std::cos(theta) * m_z + std::sin(theta) * m_x)); };

  const double step = 2.0 * std::numbers::pi / grid;
  int best = 0;
  double best_value = value_at(0.0);
  for (int k = 1; k < grid; ++k) {
    const double v = value_at(k * step);
    // Ties keep the earliest angle.
    if (v > best_value + 1e-12) {
      best_value = v;
      best = k;
    }
  }

  // Golden-section search on [theta* - step, theta* + step].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best * step - step;
  double hi = best * step + step;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = value_at(a);
  double fb = value_at(b);
  while (hi - lo > 1e-12) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = value_at(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = value_at(b);
    }
  }
  double theta = best * step;
  const double refined = 0.5 * (lo + hi);
  if (value_at(refined) > best_value) theta = refined;

  const auto eig = hermitian_eig(hermitian_part(std::cos(theta) * m_z + std::sin(theta) * m_x));
  BlochWitness w;
  w.theta = std::fmod(theta + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  w.value = eig.eigenvalues.back();
  w.state = ComplexMatrix::projector(eig.eigenvectors.column(eig.eigenvalues.size() - 1));
  return w;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "FEASIBLE";
    case Verdict::Infeasible: return "INFEASIBLE";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

FeasibilityReport find_squash(const Bb84Povm& p, int max_iter, double tol) {
  if (!validate(p).passed) throw Error(ErrorCode::InvalidPovm, "find_squash requires a valid POVM");
  const std::size_t d = p.dim();
  const auto m_z = p.element({Basis::Z, 0}) - p.element({Basis::Z, 1});
  const auto m_x = p.element({Basis::X, 0}) - p.element({Basis::X, 1});

  FeasibilityReport report;
  report.witness = bloch_witness(m_z, m_x);
  if (report.witness->value > 1.0 + kWitnessMargin) {
    report.verdict = Verdict::Infeasible;
    return report;
  }

  const ChoiConstraints constraints(p);
  // Start from the fully mixing channel rho -> Tr(rho) I/2.
  ComplexMatrix j = ComplexMatrix::identity(2 * d) * Complex(0.5);
  report.gap = distance(constraints.project(j), project_psd(j));
  for (int it = 1; it <= max_iter; ++it) {
    const auto on_affine = constraints.project(j);
    const auto on_cone = project_psd(j);
    report.gap = distance(on_affine, on_cone);
    report.iterations = it;
    if (report.gap <= tol) {
      const ChoiMatrix candidate{d, project_psd(on_affine)};
      try {
        SquashMap f = squash_from_choi(candidate);
        auto verification = verify_squash(f, p, kFeasibleVerifyTol);
        if (verification.passed) {
          report.verdict = Verdict::Feasible;
          report.squash = std::move(f);
        }
        report.verification = verification;
      } catch (const Error&) {
        // Extraction failed; fall through to UNDECIDED.
      }
      return report;
    }
    j = 0.5 * (on_affine + on_cone);
  }
  return report;
}

}  // namespace squashkit
