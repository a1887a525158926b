#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

// Units used throughout: hbar = a = kappa = 1, hence m = 1/2.
// Velocities are in kappa*a, energies in kappa, times in 1/kappa.

namespace dwm {

inline constexpr double kHopping = 1.0;   // kappa
inline constexpr double kBandHalfWidth = 2.0;  // free band is [-2, 2] kappa

/// Negative-imaginary absorbing layer over the outermost `width` sites,
/// ramping linearly from 0 to `strength` (in kappa) at the boundary.
struct AbsorbingLayer {
  int width = 0;
  double strength = 0.0;
};

/// Finite symmetric chain of 2M+1 sites, n = -M..M.
struct LatticeModel {
  int half_width = 1;  // M
  std::optional<AbsorbingLayer> absorber;  // open boundary when absent

  int site_count() const { return 2 * half_width + 1; }

  void validate() const {
    if (half_width < 1) throw std::invalid_argument("lattice half_width must be >= 1");
    if (absorber) {
      if (absorber->width < 1 || absorber->width >= half_width)
        throw std::invalid_argument("absorbing layer width must be in [1, M)");
      if (absorber->strength < 0.0)
        throw std::invalid_argument("absorbing layer strength must be >= 0");
    }
  }
};

struct PoschlTeller {
  double nu = 1.0;      // well strength, > 0
  double l = 1.0;       // width in units of a, > 0
  double center0 = 0.0; // well center at t = 0
};

struct Harmonic {
  double omega = 1.0;   // curvature Omega in 1/a^2, > 0
  double center0 = 0.0;
};

struct Tabulated {
  std::vector<double> samples;  // one energy per site, length 2M+1
};

/// Potential well description plus drift velocity v: the sampled argument is
/// x + v t, so the instantaneous center moves as x_c(t) = x_c(0) - v t.
struct PotentialSpec {
  std::variant<PoschlTeller, Harmonic, Tabulated> shape;
  double drift_v = 0.0;

  void validate() const;
};

/// Pointwise Poschl-Teller value -nu(nu+1)(1/l)^2 / cosh^2(x/l).
double poschl_teller_value(double nu, double l, double x);

/// Instantaneous well center x_c(t) = x_c(0) - v t.
double potential_center(const PotentialSpec& spec, double t);

/// Sample V(n a + v t) on every site. Tabulated wells cannot drift:
/// v*t != 0 is an error for them.
std::vector<double> sample_potential(const PotentialSpec& spec,
                                     const LatticeModel& model, double t);

/// Per-site absorber decay rates Gamma_n (zeros when the boundary is open).
std::vector<double> absorber_rates(const LatticeModel& model);

}  // namespace dwm
