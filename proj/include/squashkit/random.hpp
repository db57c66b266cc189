#pragma once

#include <cstddef>
#include <random>

#include "squashkit/linalg.hpp"

namespace squashkit {

// Random full-rank density matrix G G^dagger / Tr(G G^dagger) from a complex Ginibre sample.
template <class Rng>
ComplexMatrix random_density_matrix(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(dim);
  for (auto& z : g.entries()) z = Complex(normal(rng), normal(rng));
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return hermitian_part(rho);
}

template <class Rng>
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  ComplexMatrix g(dim);
  for (auto& z : g.entries()) z = Complex(normal(rng), normal(rng));
  return hermitian_part(g);
}

}  // namespace squashkit
