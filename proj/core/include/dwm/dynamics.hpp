#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dwm/lattice.hpp"
#include "dwm/wave_state.hpp"

namespace dwm {

struct AdaptiveTolerances {
  double rel = 1e-8;
  double abs = 1e-10;
};

/// Integration setup. Fixed mode steps with dt (capped at 0.05); adaptive
/// mode does step doubling with a 1/15 Richardson error estimate.
struct EvolutionConfig {
  double dt = 0.01;
  std::optional<AdaptiveTolerances> adaptive;  // fixed step when absent
  double t_max = 1.0;
  int record_stride = 100;

  // Observable windows (half-widths, units of a) for the recorded series.
  double loc_half_window = 30.0;
  double tail_half_window = 25.0;

  /// Optional co-moving reference for the overlap series. When absent the
  /// initial state translated by the well displacement (nearest site) is used.
  std::function<WaveState(double)> reference;

  void validate() const;
};

struct SeriesPoint {
  double t;
  double norm_sq;
  double localized_fraction;  // about the instantaneous well center
  double comoving_overlap;    // |<ref(t)|c(t)>|^2
  double center_of_mass;
  double tail_norm;           // weight outside the tail window
};

struct TrajectoryRecord {
  std::vector<WaveState> snapshots;
  std::vector<SeriesPoint> series;
  /// False once the outer 10 sites ever carry more than 1e-4 probability
  /// with an open boundary (boundary reflections may corrupt late-time fits).
  bool boundary_clean = true;
  double max_norm_drift = 0.0;  // max abs(norm - 1) seen at recorded times

  const WaveState& final_state() const { return snapshots.back(); }
};

/// dc_n/dt = -i[-(c_{n+1} + c_{n-1}) + V(na + vt) c_n], open ends; an
/// absorbing layer adds -Gamma_n c_n on the edge sites.
std::vector<std::complex<double>> rhs(const WaveState& state,
                                      const PotentialSpec& spec,
                                      const LatticeModel& model);

/// One classical RK4 step with the drifting potential sampled at t, t+dt/2
/// (shared by the two middle stages) and t+dt.
WaveState rk4_step(const WaveState& state, const PotentialSpec& spec,
                   const LatticeModel& model, double dt);

/// Propagate a normalized state to t_max, recording snapshots and the
/// observable series every record_stride accepted steps. Throws if the norm
/// drifts beyond 1e-6 with an open boundary, or if the adaptive step
/// underflows below 1e-6.
TrajectoryRecord evolve(const WaveState& state0, const PotentialSpec& spec,
                        const LatticeModel& model, const EvolutionConfig& cfg);

/// Discrete oscillator ground state: c_n ~ exp(-(n-center)^2/(2 sigma^2))
/// with sigma^2 = (m/m*) sqrt(2/Omega). Throws when sigma < a (state not
/// resolvable on the lattice).
WaveState harmonic_ground_state(const LatticeModel& model, double omega,
                                double mass_ratio, double center);

struct LifetimeFit {
  double tau = std::numeric_limits<double>::infinity();
  double r_squared = 1.0;
};

/// Least-squares fit of log(comoving_overlap) vs t on [t1, t2]:
/// tau = -1/slope. Needs >= 20 recorded points and positive overlaps. A flat
/// series (or tau beyond 1e9) reports tau = +inf; a growing, structured one
/// throws (no decaying regime).
LifetimeFit estimate_lifetime(const TrajectoryRecord& traj, double t1, double t2);

/// 1 - localized_fraction about `center`: the weight radiated outside the
/// co-moving window.
double radiation_tail_norm(const WaveState& state, double center, double half_window);

namespace detail {

/// Raw tight-binding integrator on amplitudes of any length:
/// dc = -i[-(c_+ + c_-) + V(t) c] - Gamma c.
class ChainPropagator {
 public:
  std::function<void(double, std::vector<double>&)> sample_potential;
  std::vector<double> gamma;  // absorber rates, may be empty

  /// dc for an already-sampled potential.
  void derivative(const std::vector<std::complex<double>>& c,
                  const std::vector<double>& v,
                  std::vector<std::complex<double>>& dc) const;

  /// One classical RK4 step; V sampled at t, t+dt/2 (shared) and t+dt.
  void rk4(std::vector<std::complex<double>>& c, double t, double dt);

 private:
  std::vector<double> v_begin_, v_mid_, v_end_;
  std::vector<std::complex<double>> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace detail
}  // namespace dwm
