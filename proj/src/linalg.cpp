#include "squashkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "squashkit/error.hpp"

namespace squashkit {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << op << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(op) + ": matrix is not square");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match shape");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> diag) {
  Vector d(diag.begin(), diag.end());
  return diagonal(std::span<const Complex>(d));
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

std::size_t ComplexMatrix::dim() const {
  require_square(*this, "dim");
  return rows_;
}

Vector ComplexMatrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector ComplexMatrix::row(std::size_t r) const {
  return Vector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

Complex ComplexMatrix::trace() const {
  require_square(*this, "trace");
  Complex t{};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
  }
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  }
  return m;
}

Vector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s{};
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw Error(ErrorCode::DimensionMismatch, "inner product");
  Complex s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

double norm(std::span<const Complex> v) { return std::sqrt(inner(v, v).real()); }

Vector scaled(std::span<const Complex> v, Complex s) {
  Vector out(v.begin(), v.end());
  for (auto& z : out) z *= s;
  return out;
}

Vector basis_vector(std::size_t dim, std::size_t index) {
  Vector v(dim);
  v.at(index) = 1.0;
  return v;
}

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  double s = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) s += (std::conj(ea[i]) * eb[i]).real();
  return s;
}

double distance(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).frobenius_norm(); }

double hermiticity_residual(const ComplexMatrix& a) {
  require_square(a, "hermiticity_residual");
  return distance(a, a.adjoint());
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

ComplexMatrix matrix_power(const ComplexMatrix& a, unsigned exponent) {
  ComplexMatrix result = ComplexMatrix::identity(a.dim());
  ComplexMatrix base = a;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& x) { return a * x * a.adjoint(); }

double unitarity_residual(const ComplexMatrix& u) {
  return distance(u.adjoint() * u, ComplexMatrix::identity(u.cols()));
}

double operator_norm(const ComplexMatrix& a) {
  const double top = max_eigenvalue(hermitian_part(a.adjoint() * a));
  return std::sqrt(std::max(top, 0.0));
}

namespace pauli {
ComplexMatrix x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix y() { return ComplexMatrix::from_rows({{0.0, -kI}, {kI, 0.0}}); }
ComplexMatrix z() { return ComplexMatrix::diagonal({1.0, -1.0}); }
}  // namespace pauli

HermitianEig hermitian_eig(const ComplexMatrix& input, double tol) {
  require_square(input, "hermitian_eig");
  const std::size_t n = input.rows();
  if (n > kMaxEigenDim) {
    throw Error(ErrorCode::DimensionMismatch, "hermitian_eig supports dim <= 256");
  }
  const double scale = input.frobenius_norm();
  if (hermiticity_residual(input) > std::max(1e-10, tol * scale)) {
    throw Error(ErrorCode::NotHermitian, "||A - A^dagger||_F exceeds tolerance");
  }

  ComplexMatrix a = hermitian_part(input);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double stop = 1e-13 * scale;
  // Below this magnitude a rotation would only perturb at rounding level.
  const double negligible = 1e-17 * scale;

  auto max_offdiag = [&] {
    double m = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) m = std::max(m, std::abs(a(p, q)));
    return m;
  };

  int sweep = 0;
  while (scale > 0.0 && max_offdiag() >= stop) {
    if (sweep++ == kMaxJacobiSweeps) {
      throw Error(ErrorCode::NoConvergence, "Jacobi sweep cap reached");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= negligible) continue;
        const Complex phase = apq / mag;

        // Rotation J = diag(1, conj(phase)) * [[c, s], [-s, c]] zeroes (p, q) of J^dagger A J.
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEig eig;
  eig.eigenvalues.resize(n);
  eig.eigenvectors = ComplexMatrix(n);
  for (std::size_t col = 0; col < n; ++col) {
    eig.eigenvalues[col] = a(order[col], order[col]).real();
    for (std::size_t r = 0; r < n; ++r) eig.eigenvectors(r, col) = v(r, order[col]);
  }
  return eig;
}

double min_eigenvalue(const ComplexMatrix& a, double tol) {
  const auto eig = hermitian_eig(a, tol);
  return eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
}

double max_eigenvalue(const ComplexMatrix& a, double tol) {
  const auto eig = hermitian_eig(a, tol);
  return eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
}

ComplexMatrix unitary_from_generator(const ComplexMatrix& a, double angle) {
  const auto eig = hermitian_eig(a);
  const std::size_t n = a.dim();
  ComplexMatrix scaled_vectors = eig.eigenvectors;
  for (std::size_t c = 0; c < n; ++c) {
    const Complex phase = std::polar(1.0, angle * eig.eigenvalues[c]);
    for (std::size_t r = 0; r < n; ++r) scaled_vectors(r, c) *= phase;
  }
  return scaled_vectors * eig.eigenvectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1, std::size_t d2, Keep keep) {
  if (!m.is_square() || m.rows() != d1 * d2) {
    throw Error(ErrorCode::DimensionMismatch, "partial_trace: dim(M) != d1 * d2");
  }
  if (keep == Keep::First) {
    ComplexMatrix out(d1);
    for (std::size_t a = 0; a < d1; ++a)
      for (std::size_t a2 = 0; a2 < d1; ++a2) {
        Complex s{};
        for (std::size_t b = 0; b < d2; ++b) s += m(a * d2 + b, a2 * d2 + b);
        out(a, a2) = s;
      }
    return out;
  }
  ComplexMatrix out(d2);
  for (std::size_t b = 0; b < d2; ++b)
    for (std::size_t b2 = 0; b2 < d2; ++b2) {
      Complex s{};
      for (std::size_t a = 0; a < d1; ++a) s += m(a * d2 + b, a * d2 + b2);
      out(b, b2) = s;
    }
  return out;
}

int rank_tol(const ComplexMatrix& a, double tol) {
  if (tol < 0) tol = 1e-9 * std::max(1.0, a.frobenius_norm());
  const auto eig = hermitian_eig(a);
  return static_cast<int>(std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(),
                                        [tol](double lambda) { return std::abs(lambda) > tol; }));
}

}  // namespace squashkit
