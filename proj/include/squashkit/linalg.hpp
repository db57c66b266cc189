#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace squashkit {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

inline constexpr Complex kI{0.0, 1.0};

// Absolute-plus-relative comparison bound: max(atol, rtol * scale).
struct Tolerance {
  double atol = 1e-10;
  double rtol = 1e-9;

  double bound(double scale) const { return atol > rtol * scale ? atol : rtol * scale; }
};

/// Dense complex matrix stored row-major. Operators, states and unitaries are
/// square; Kraus operators use the rectangular form (2 x d).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  explicit ComplexMatrix(std::size_t dim) : ComplexMatrix(dim, dim) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::initializer_list<double> diag);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  // |u><v|
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);
  static ComplexMatrix projector(std::span<const Complex> u) { return outer(u, u); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  // Requires a square matrix.
  std::size_t dim() const;
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  Vector column(std::size_t c) const;
  Vector row(std::size_t r) const;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);
Vector operator*(const ComplexMatrix& a, std::span<const Complex> v);

// ---- vectors ----
Complex inner(std::span<const Complex> u, std::span<const Complex> v);  // <u|v>
double norm(std::span<const Complex> v);
Vector scaled(std::span<const Complex> v, Complex s);
Vector basis_vector(std::size_t dim, std::size_t index);

// ---- matrix helpers ----
// Re Tr(A^dagger B)
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double distance(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_residual(const ComplexMatrix& a);
ComplexMatrix hermitian_part(const ComplexMatrix& a);
ComplexMatrix matrix_power(const ComplexMatrix& a, unsigned exponent);
// A X A^dagger
ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& x);
double unitarity_residual(const ComplexMatrix& u);
// Largest singular value, computed from the spectrum of A^dagger A.
double operator_norm(const ComplexMatrix& a);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns
};

inline constexpr std::size_t kMaxEigenDim = 256;
inline constexpr int kMaxJacobiSweeps = 100;

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
/// Throws NotHermitian when ||A - A^dagger||_F exceeds tol * ||A||_F (with a
/// 1e-10 absolute floor) and NoConvergence when the sweep cap is reached.
HermitianEig hermitian_eig(const ComplexMatrix& a, double tol = 1e-9);

double min_eigenvalue(const ComplexMatrix& a, double tol = 1e-9);
double max_eigenvalue(const ComplexMatrix& a, double tol = 1e-9);

// exp(i * angle * A) for Hermitian A.
ComplexMatrix unitary_from_generator(const ComplexMatrix& a, double angle);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Keep { First, Second };

// Composite index a * d2 + b, matching kron.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1, std::size_t d2, Keep keep);

// Default tolerance (tol < 0) is 1e-9 * max(1, ||A||_F).
int rank_tol(const ComplexMatrix& a, double tol = -1.0);

}  // namespace squashkit
