#include "squashkit/squash.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "squashkit/error.hpp"
#include "squashkit/random.hpp"

namespace squashkit {

namespace {

constexpr double kZeroComponent = 1e-12;
constexpr double kDeficiencyFloor = -1e-9;
constexpr double kCompletionCutoff = 1e-12;

Complex i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

ComplexMatrix gram(const std::vector<ComplexMatrix>& kraus, std::size_t dim) {
  ComplexMatrix s(dim);
  for (const auto& f : kraus) s += f.adjoint() * f;
  return s;
}

template <class Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(stage, e);
  }
}

}  // namespace

SquashMap::SquashMap(std::size_t in_dim, std::vector<ComplexMatrix> kraus) : in_dim_(in_dim), kraus_(std::move(kraus)) {
  if (in_dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "squash input dimension must be positive");
  for (const auto& f : kraus_) {
    if (f.rows() != 2 || f.cols() != in_dim_) {
      throw Error(ErrorCode::DimensionMismatch, "Kraus operators must be 2 x in_dim");
    }
  }
}

ComplexMatrix SquashMap::apply(const ComplexMatrix& rho) const {
  if (!rho.is_square() || rho.rows() != in_dim_) throw Error(ErrorCode::DimensionMismatch, "input state dimension");
  ComplexMatrix out(2);
  for (const auto& f : kraus_) out += f * rho * f.adjoint();
  return out;
}

ComplexMatrix SquashMap::apply_adjoint(const ComplexMatrix& x) const {
  if (!x.is_square() || x.rows() != 2) throw Error(ErrorCode::DimensionMismatch, "output operator must be 2 x 2");
  ComplexMatrix out(in_dim_);
  for (const auto& f : kraus_) out += f.adjoint() * x * f;
  return out;
}

Vector y_basis_state(int bit) {
  const double h = 1.0 / std::sqrt(2.0);
  return bit == 0 ? Vector{h, Complex(0.0, h)} : Vector{h, Complex(0.0, -h)};
}

Rank2Extraction extract_rank2(const Observable& m_z, const C4Symmetry& sym, double tol) {
  if (sym.k != 1) throw Error(ErrorCode::KNotOne, "extract_rank2 needs a phase-normalized U (k = 1)");
  const auto& m = m_z.matrix;
  if (sym.unitary.rows() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "U and M_z dimensions differ");

  const auto eig = hermitian_eig(m);
  const double cutoff = 1e-9 * std::max(1.0, m.frobenius_norm());
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues[i]) > cutoff) nonzero.push_back(i);
  }
  if (nonzero.size() != 2) {
    throw Error(ErrorCode::RankNotTwo, "M_z has rank " + std::to_string(nonzero.size()));
  }
  const double low = eig.eigenvalues[nonzero.front()];
  const double high = eig.eigenvalues[nonzero.back()];
  if (high <= 0.0 || low >= 0.0 || std::abs(high + low) > tol) {
    throw Error(ErrorCode::SpectrumAsymmetric, "nonzero eigenvalues of M_z are not {lambda, -lambda}");
  }
  if (high > 1.0 + tol) throw Error(ErrorCode::SpectrumAsymmetric, "lambda exceeds 1");

  Rank2Extraction out;
  out.lambda = high;
  out.v = eig.eigenvectors.column(nonzero.back());
  const auto u2 = sym.unitary * sym.unitary;
  const auto pv = ComplexMatrix::projector(out.v);
  out.residual = distance(m, out.lambda * (pv - conjugate(u2, pv)));
  return out;
}

MuDecomposition mu_decompose(const Vector& v, double lambda, const C4Symmetry& sym, double tol) {
  const auto projectors = c4_eigenprojectors(sym);
  if (projectors[0].rows() != v.size()) throw Error(ErrorCode::DimensionMismatch, "vector and U dimensions differ");

  MuDecomposition dec;
  dec.lambda = lambda;
  dec.v = v;
  for (int c = 0; c < 4; ++c) {
    Vector component = projectors[c] * v;
    const double mu = norm(component);
    dec.mu[c] = mu;
    if (mu > kZeroComponent) dec.v_c[c] = scaled(component, 1.0 / mu);
  }
  const auto u2 = sym.unitary * sym.unitary;
  dec.orthogonality = inner(v, u2 * v);

  const double total = dec.mu[0] * dec.mu[0] + dec.mu[1] * dec.mu[1] + dec.mu[2] * dec.mu[2] + dec.mu[3] * dec.mu[3];
  const double even = dec.mu[0] * dec.mu[0] + dec.mu[2] * dec.mu[2];
  const double odd = dec.mu[1] * dec.mu[1] + dec.mu[3] * dec.mu[3];
  if (std::abs(total - 1.0) > tol) throw Error(ErrorCode::SpectrumAsymmetric, "v is not a unit vector");
  if (std::abs(dec.orthogonality) > tol) throw Error(ErrorCode::SpectrumAsymmetric, "<v|U^2|v> != 0");
  if (std::abs(even - 0.5) > tol || std::abs(odd - 0.5) > tol) {
    throw Error(ErrorCode::SpectrumAsymmetric, "mu_0^2 + mu_2^2 and mu_1^2 + mu_3^2 must both equal 1/2");
  }
  return dec;
}

std::vector<ComplexMatrix> kraus_core(const MuDecomposition& dec) {
  const auto y0 = y_basis_state(0);
  const auto y1 = y_basis_state(1);
  const double amp = std::sqrt(2.0 * dec.lambda);
  std::vector<ComplexMatrix> core;
  for (int c = 0; c < 4; ++c) {
    const int next = (c + 1) % 4;
    if (dec.v_c[c].empty() || dec.v_c[next].empty()) continue;
    ComplexMatrix f = ComplexMatrix::outer(y0, dec.v_c[c]) * Complex(amp * dec.mu[next]);
    f += ComplexMatrix::outer(y1, dec.v_c[next]) * Complex(amp * dec.mu[c]);
    core.push_back(std::move(f));
  }
  return core;
}

SquashMap complete_trace_preserving(std::vector<ComplexMatrix> core, std::size_t dim) {
  for (const auto& f : core) {
    if (f.rows() != 2 || f.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "Kraus operators must be 2 x dim");
  }
  const auto deficiency = ComplexMatrix::identity(dim) - gram(core, dim);
  const auto eig = hermitian_eig(hermitian_part(deficiency));
  if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < kDeficiencyFloor) {
    throw Error(ErrorCode::DeficiencyNotPsd, "sum F_c^dagger F_c exceeds the identity");
  }
  const auto y0 = y_basis_state(0);
  for (std::size_t j = 0; j < dim; ++j) {
    const double d = eig.eigenvalues[j];
    if (d < kCompletionCutoff) continue;
    core.push_back(ComplexMatrix::outer(y0, eig.eigenvectors.column(j)) * Complex(std::sqrt(d)));
  }
  return SquashMap(dim, std::move(core));
}

Theorem1Trace construct_theorem1_traced(const Bb84Povm& p, const C4Symmetry& sym, double tol) {
  run_stage("validate", [&] {
    if (!validate(p, tol).passed) throw Error(ErrorCode::InvalidPovm, "POVM failed validation");
    return 0;
  });
  run_stage("symmetry", [&] {
    require_c4_symmetry(sym);
    const auto report = check_definition1(sym, p, tol);
    if (!report.passed) {
      throw Error(ErrorCode::SymmetryViolated,
                  "C4 relations fail, max residual " + std::to_string(report.max_residual));
    }
    return 0;
  });
  const C4Symmetry normalized = run_stage("phase_normalize", [&] {
    auto n = phase_normalize(sym);
    if (n.k != 1) throw Error(ErrorCode::KNotOne, "U^4 is not a scalar; use the feasibility finder");
    return n;
  });
  const Rank2Extraction rank2 = run_stage("extract_rank2", [&] {
    auto r = extract_rank2(observable(p, Basis::Z, tol), normalized, tol);
    if (r.residual > tol) throw Error(ErrorCode::SpectrumAsymmetric, "rank-two form of M_z does not hold");
    return r;
  });
  MuDecomposition dec =
      run_stage("mu_decompose", [&] { return mu_decompose(rank2.v, rank2.lambda, normalized, tol); });
  std::vector<ComplexMatrix> core = run_stage("kraus_core", [&] { return kraus_core(dec); });
  SquashMap map = run_stage("complete_trace_preserving", [&] { return complete_trace_preserving(core, p.dim()); });
  run_stage("verify", [&] {
    const auto report = verify_squash(map, p, tol);
    if (!report.passed) {
      throw Error(ErrorCode::VerificationFailed, "constructed map fails verification, max residual " +
                                                     std::to_string(report.max_residual()));
    }
    return 0;
  });
  return Theorem1Trace{normalized, rank2, std::move(dec), std::move(core), std::move(map)};
}

SquashMap construct_theorem1(const Bb84Povm& p, const C4Symmetry& sym, double tol) {
  return construct_theorem1_traced(p, sym, tol).map;
}

ProofIdentities proof_identities(const Bb84Povm& p, const Theorem1Trace& trace) {
  const auto& dec = trace.decomposition;
  const auto& u = trace.normalized.unitary;
  const std::size_t d = p.dim();
  const auto m_z = p.element({Basis::Z, 0}) - p.element({Basis::Z, 1});
  const auto m_x = p.element({Basis::X, 0}) - p.element({Basis::X, 1});
  const auto target = m_z + kI * m_x;

  ProofIdentities out;
  out.orthogonality = std::abs(dec.orthogonality);
  out.mu_even = std::abs(dec.mu[0] * dec.mu[0] + dec.mu[2] * dec.mu[2] - 0.5);
  out.mu_odd = std::abs(dec.mu[1] * dec.mu[1] + dec.mu[3] * dec.mu[3] - 0.5);

  ComplexMatrix from_kraus(d);
  for (int c = 0; c < 4; ++c) {
    const int next = (c + 1) % 4;
    if (dec.v_c[c].empty() || dec.v_c[next].empty()) continue;
    from_kraus += ComplexMatrix::outer(dec.v_c[c], dec.v_c[next]) * Complex(4.0 * dec.lambda * dec.mu[c] * dec.mu[next]);
  }
  ComplexMatrix orbit(d);
  ComplexMatrix uc = ComplexMatrix::identity(d);
  const auto pv = ComplexMatrix::projector(dec.v);
  for (int c = 0; c < 4; ++c) {
    orbit += (dec.lambda * i_power(c)) * conjugate(uc, pv);
    uc = uc * u;
  }
  out.kraus_vs_orbit = distance(from_kraus, orbit);
  out.orbit_vs_target = distance(orbit, target);

  const auto& f = trace.map;
  const auto lifted = f.apply_adjoint(pauli::z() + kI * pauli::x());
  out.adjoint_vs_target = distance(lifted, target);
  out.hc_reconstruction = distance(f.apply_adjoint(pauli::z()), 0.5 * (lifted + lifted.adjoint()));
  return out;
}

double VerificationReport::max_residual() const {
  return std::max({residual_z, residual_x, residual_tp, spot_check});
}

VerificationReport verify_squash(const SquashMap& f, const Bb84Povm& p, double tol, int spot_samples) {
  if (f.in_dim() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "squash input and POVM dimensions differ");
  const std::size_t d = p.dim();
  const auto m_z = p.element({Basis::Z, 0}) - p.element({Basis::Z, 1});
  const auto m_x = p.element({Basis::X, 0}) - p.element({Basis::X, 1});

  VerificationReport report;
  report.residual_z = distance(f.apply_adjoint(pauli::z()), m_z);
  report.residual_x = distance(f.apply_adjoint(pauli::x()), m_x);
  report.residual_tp = distance(gram(f.kraus(), d), ComplexMatrix::identity(d));

  std::mt19937_64 rng(kSpotCheckSeed);
  for (int s = 0; s < spot_samples; ++s) {
    const auto rho = random_density_matrix(d, rng);
    const auto out = f.apply(rho);
    const double dz = std::abs((out * pauli::z()).trace() - (rho * m_z).trace());
    const double dx = std::abs((out * pauli::x()).trace() - (rho * m_x).trace());
    report.spot_check = std::max({report.spot_check, dz, dx});
  }
  report.spot_samples = spot_samples;
  report.passed = report.max_residual() <= tol;
  return report;
}

}  // namespace squashkit
