#pragma once

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "squashkit/linalg.hpp"
#include "squashkit/random.hpp"

namespace squashkit::testing {

inline ::testing::AssertionResult MatrixNear(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return ::testing::AssertionFailure() << "shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
                                         << b.cols();
  }
  const double d = distance(a, b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "||A - B||_F = " << d << " > " << tol;
}

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) z = Complex(normal(rng), normal(rng));
  return m;
}

inline ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
  return unitary_from_generator(random_hermitian(dim, rng), 1.0);
}

}  // namespace squashkit::testing
