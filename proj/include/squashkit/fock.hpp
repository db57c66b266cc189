#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "squashkit/group.hpp"
#include "squashkit/linalg.hpp"
#include "squashkit/povm.hpp"

namespace squashkit {

/// Fixed photon-number configuration N = (n_1, ..., n_m) of a threshold detector.
///
/// Basis vectors are configurations (j_1, ..., j_m), where j_i counts the
/// photons of mode i in polarization z0 (the remaining n_i - j_i are in z1).
/// They are ordered lexicographically with descending j, so the first basis
/// vector has every photon in z0 and the last has every photon in z1.
class FockSector {
 public:
  // Throws InvalidSector for an empty N or a vacuum sector.
  explicit FockSector(std::vector<int> photons);

  const std::vector<int>& photons() const noexcept { return photons_; }
  int modes() const noexcept { return static_cast<int>(photons_.size()); }
  int total_photons() const noexcept;
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<std::vector<int>>& basis() const noexcept { return basis_; }
  std::size_t index_of(const std::vector<int>& config) const;

 private:
  std::vector<int> photons_;
  std::vector<std::vector<int>> basis_;
};

// |N; r, b>: all photons of every mode created in the (r, b) polarization.
Vector state_nrb(const FockSector& sector, Basis r, int bit);

struct DetectorModel {
  FockSector sector;
  Bb84Povm povm;
  ComplexMatrix m_z;
  ComplexMatrix m_x;
  ComplexMatrix u_n;
  std::array<Vector, 4> states;  // z0, z1, x0, x1

  const Vector& state(Label l) const { return states[static_cast<std::size_t>(l.basis) * 2 + l.bit]; }
};

// Double clicks are randomized: M_(r,b) = |N;r,b><N;r,b| + (I - P_r0 - P_r1)/2.
DetectorModel build_detector(const FockSector& sector);

// sum_i i (a+_{i,z1} a_{i,z0} - a+_{i,z0} a_{i,z1}) = sum_i (n_{i,y0} - n_{i,y1}) on the sector.
ComplexMatrix polarization_generator(const FockSector& sector);

// 45-degree polarization rotation exp(-i pi/4 sum_i (n_{i,y0} - n_{i,y1})).
ComplexMatrix build_u_n(const FockSector& sector);

// k = 1 for an even photon total (U_N^4 = I), k = 2 for odd (U_N^4 = -I).
C4Symmetry sector_symmetry(const DetectorModel& model);

SymmetryReport verify_sector_symmetry(const DetectorModel& model, double tol = 1e-9);

// Every N with modes in [min_modes, max_modes], n_i >= 0 and 1 <= sum n_i <= max_total.
std::vector<FockSector> enumerate_sectors(int min_modes, int max_modes, int max_total);

}  // namespace squashkit
