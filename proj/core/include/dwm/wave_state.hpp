#pragma once

#include <complex>
#include <vector>

#include "dwm/lattice.hpp"

namespace dwm {

/// Complex amplitudes c_n on the sites n = -M..M (index 0 holds n = -M),
/// together with the time they belong to.
struct WaveState {
  std::vector<std::complex<double>> amplitudes;
  double time = 0.0;

  WaveState() = default;
  explicit WaveState(int site_count, double t = 0.0)
      : amplitudes(site_count), time(t) {}

  int size() const { return static_cast<int>(amplitudes.size()); }
  int half_width() const { return (size() - 1) / 2; }
  /// Site coordinate of array index i.
  int site(int i) const { return i - half_width(); }
  /// Array index of site n.
  int index(int n) const { return n + half_width(); }

  std::complex<double>& at_site(int n) { return amplitudes[index(n)]; }
  const std::complex<double>& at_site(int n) const { return amplitudes[index(n)]; }
};

double norm_sq(const WaveState& state);

/// Conjugate-linear in the first argument.
std::complex<double> inner_product(const WaveState& a, const WaveState& b);

/// R = (sum |c|^2)^2 / sum |c|^4; 1 for a single-site state, 2M+1 for a
/// uniform one. Invariant under global phase and rescaling.
double participation_ratio(const WaveState& state);

/// Re<state|reflected state>/norm^2 about `center` (must be an integer or
/// half-integer multiple of a so that reflection maps sites to sites).
/// +1 for even, -1 for odd states.
double parity_score(const WaveState& state, double center);

/// Probability weight within |n a - center| <= half_window, normalized.
double localized_fraction(const WaveState& state, double center, double half_window);

/// Probability weight on the outermost `edge_sites` sites of each end.
double edge_occupancy(const WaveState& state, int edge_sites);

/// Site-resolved expectation of position, sum n |c_n|^2 / norm^2.
double center_of_mass(const WaveState& state);

WaveState normalized(WaveState state);

/// Translate by an integer number of sites, zero-filling; amplitudes shifted
/// past the ends are dropped.
WaveState shifted_by_sites(const WaveState& state, int delta);

}  // namespace dwm
