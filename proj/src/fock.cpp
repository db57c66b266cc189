#include "squashkit/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "squashkit/error.hpp"

namespace squashkit {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Amplitude of |j, n-j> in (a+_{x,b})^n |0> / sqrt(n!):
// 2^{-n/2} C(n,j) (-1)^{b(n-j)} sqrt(j! (n-j)!) / sqrt(n!) = 2^{-n/2} sqrt(C(n,j)) (-1)^{b(n-j)}.
double x_amplitude(int n, int j, int bit) {
  const double log_binom = log_factorial(n) - log_factorial(j) - log_factorial(n - j);
  const double magnitude = std::exp(0.5 * log_binom - 0.5 * n * std::numbers::ln2);
  return (bit == 1 && (n - j) % 2 == 1) ? -magnitude : magnitude;
}

void enumerate(const std::vector<int>& photons, std::size_t mode, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (mode == photons.size()) {
    out.push_back(current);
    return;
  }
  for (int j = photons[mode]; j >= 0; --j) {
    current[mode] = j;
    enumerate(photons, mode + 1, current, out);
  }
}

}  // namespace

FockSector::FockSector(std::vector<int> photons) : photons_(std::move(photons)) {
  if (photons_.empty()) throw Error(ErrorCode::InvalidSector, "at least one mode is required");
  if (std::any_of(photons_.begin(), photons_.end(), [](int n) { return n < 0; })) {
    throw Error(ErrorCode::InvalidSector, "photon numbers must be nonnegative");
  }
  if (total_photons() < 1) throw Error(ErrorCode::InvalidSector, "vacuum sector has no BB84 outcome");
  std::vector<int> current(photons_.size());
  enumerate(photons_, 0, current, basis_);
}

int FockSector::total_photons() const noexcept { return std::accumulate(photons_.begin(), photons_.end(), 0); }

std::size_t FockSector::index_of(const std::vector<int>& config) const {
  if (config.size() != photons_.size()) throw Error(ErrorCode::InvalidSector, "configuration has wrong mode count");
  std::size_t index = 0;
  for (std::size_t i = 0; i < photons_.size(); ++i) {
    if (config[i] < 0 || config[i] > photons_[i]) throw Error(ErrorCode::InvalidSector, "configuration out of range");
    index = index * static_cast<std::size_t>(photons_[i] + 1) + static_cast<std::size_t>(photons_[i] - config[i]);
  }
  return index;
}

Vector state_nrb(const FockSector& sector, Basis r, int bit) {
  if (bit != 0 && bit != 1) throw Error(ErrorCode::InvalidSector, "bit must be 0 or 1");
  Vector v(sector.dim());
  const auto& photons = sector.photons();
  for (std::size_t idx = 0; idx < sector.dim(); ++idx) {
    const auto& config = sector.basis()[idx];
    double amplitude = 1.0;
    for (std::size_t i = 0; i < photons.size(); ++i) {
      if (r == Basis::Z) {
        const int wanted = bit == 0 ? photons[i] : 0;
        amplitude *= config[i] == wanted ? 1.0 : 0.0;
      } else {
        amplitude *= x_amplitude(photons[i], config[i], bit);
      }
    }
    v[idx] = amplitude;
  }
  return v;
}

DetectorModel build_detector(const FockSector& sector) {
  const std::size_t d = sector.dim();
  const auto id = ComplexMatrix::identity(d);
  std::array<Vector, 4> states;
  std::array<ComplexMatrix, 4> elements;
  for (const Basis r : {Basis::Z, Basis::X}) {
    const std::size_t base = static_cast<std::size_t>(r) * 2;
    states[base] = state_nrb(sector, r, 0);
    states[base + 1] = state_nrb(sector, r, 1);
    const auto p0 = ComplexMatrix::projector(states[base]);
    const auto p1 = ComplexMatrix::projector(states[base + 1]);
    const auto double_click = 0.5 * (id - p0 - p1);
    elements[base] = p0 + double_click;
    elements[base + 1] = p1 + double_click;
  }
  Bb84Povm povm(elements[0], elements[1], elements[2], elements[3]);
  auto m_z = elements[0] - elements[1];
  auto m_x = elements[2] - elements[3];
  return DetectorModel{sector, std::move(povm), std::move(m_z), std::move(m_x), build_u_n(sector), std::move(states)};
}

ComplexMatrix polarization_generator(const FockSector& sector) {
  const std::size_t d = sector.dim();
  ComplexMatrix g(d);
  const auto& photons = sector.photons();
  for (std::size_t idx = 0; idx < d; ++idx) {
    const auto& config = sector.basis()[idx];
    for (std::size_t i = 0; i < photons.size(); ++i) {
      const int j = config[i];
      if (j == 0) continue;
      // a+_{z1} a_{z0}: |j, n-j> -> sqrt(j (n-j+1)) |j-1, n-j+1>
      auto target = config;
      target[i] = j - 1;
      const double amp = std::sqrt(static_cast<double>(j) * static_cast<double>(photons[i] - j + 1));
      const std::size_t t = sector.index_of(target);
      g(t, idx) += kI * amp;
      g(idx, t) += -kI * amp;
    }
  }
  return g;
}

ComplexMatrix build_u_n(const FockSector& sector) {
  return unitary_from_generator(polarization_generator(sector), -std::numbers::pi / 4.0);
}

C4Symmetry sector_symmetry(const DetectorModel& model) {
  return C4Symmetry{model.u_n, model.sector.total_photons() % 2 == 0 ? 1 : 2};
}

SymmetryReport verify_sector_symmetry(const DetectorModel& model, double tol) {
  const C4Symmetry sym = sector_symmetry(model);
  require_c4_symmetry(sym);
  const C4Symmetry normalized = phase_normalize(sym);
  SymmetryReport report = check_definition1(normalized, model.povm, tol);
  report.phase_normalized = sym.k != normalized.k;
  return report;
}

std::vector<FockSector> enumerate_sectors(int min_modes, int max_modes, int max_total) {
  std::vector<FockSector> out;
  for (int m = std::max(1, min_modes); m <= max_modes; ++m) {
    std::vector<int> n(static_cast<std::size_t>(m), 0);
    // Odometer over n_i in [0, max_total].
    while (true) {
      const int total = std::accumulate(n.begin(), n.end(), 0);
      if (total >= 1 && total <= max_total) out.emplace_back(n);
      std::size_t pos = 0;
      while (pos < n.size() && n[pos] == max_total) n[pos++] = 0;
      if (pos == n.size()) break;
      ++n[pos];
    }
  }
  return out;
}

}  // namespace squashkit
