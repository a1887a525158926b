#pragma once

#include <stdexcept>
#include <vector>

#include "dwm/wave_state.hpp"

namespace dwm {

/// Thrown when |v| exceeds the maximal lattice group velocity 2*kappa*a,
/// where sin(qa) = v/2 has no real solution.
class BeyondCriticalVelocity : public std::domain_error {
 public:
  explicit BeyondCriticalVelocity(double v);
  double velocity() const { return v_; }

 private:
  double v_;
};

/// Galilean-boost constants for drift velocity v: boost phase qa (principal
/// branch, |qa| <= pi/2), gauge frequency gamma and the renormalized-mass
/// ratio m*/m = 1/cos(qa).
struct BoostParameters {
  double v = 0.0;
  double qa = 0.0;
  double gamma = 0.0;
  double mass_ratio = 1.0;

  /// sin(qa) = v/2, the dimensionless group mva/hbar.
  double sin_qa() const { return 0.5 * v; }
};

BoostParameters solve_boost(double v);

/// Effective well strength nu* of the boosted Poschl-Teller well, the
/// positive root of nu*(nu*+1) = mass_ratio * nu(nu+1).
double effective_depth(double nu, double mass_ratio);

/// Moving-frame dispersion E(k) = 4 sin((k+2q)/2) sin(k/2) - v k. Not
/// periodic for v != 0 and unbounded both ways.
double dispersion(double k, const BoostParameters& bp);

/// Momentum-space potential W(k) = 2(1 - cos k) - v k.
double momentum_potential(double k, double v);

enum class ExtremumKind { Minimum, Maximum, Degenerate };

struct MomentumExtremum {
  double k;
  double w;
  ExtremumKind kind;
};

/// Stationary points of W on k in [-2pi, 2pi] for v >= 0, found by bracketed
/// bisection of W' = 2 sin k - v and classified by the sign of W''. Empty for
/// v > 2; the two W'=W''=0 inflections are reported as Degenerate at v = 2.
std::vector<MomentumExtremum> momentum_potential_extrema(double v);

/// Multiply by the plane-wave boost factor exp(i qa n); pure phase, so all
/// moduli, the norm and the participation ratio are unchanged.
WaveState boosted_initial_state(const WaveState& phi, const BoostParameters& bp);

}  // namespace dwm
