#pragma once

#include <stdexcept>
#include <vector>

#include "dwm/lattice.hpp"
#include "dwm/wave_state.hpp"

namespace dwm {

/// Real symmetric tridiagonal Hamiltonian with constant hopping -kappa on the
/// off-diagonals; only the on-site energies are stored.
struct TridiagonalHamiltonian {
  std::vector<double> diag;

  TridiagonalHamiltonian() = default;
  explicit TridiagonalHamiltonian(std::vector<double> d) : diag(std::move(d)) {}

  static constexpr double offdiag = -kHopping;
  int size() const { return static_cast<int>(diag.size()); }

  /// y = H x for a real vector.
  std::vector<double> apply(const std::vector<double>& x) const;
};

class EigensolverError : public std::runtime_error {
 public:
  EigensolverError(int index, const std::string& what);
  int index() const { return index_; }

 private:
  int index_;
};

class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full spectrum of a TridiagonalHamiltonian: eigenvalues ascending,
/// orthonormal real eigenvectors, per-state participation ratio and parity
/// about the chain midpoint, and (after classification) bound flags.
struct SpectrumReport {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;  // [j][site index]
  std::vector<double> participation;
  std::vector<double> parity;
  std::vector<bool> bound;
  double max_residual = 0.0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  int bound_count() const;
  /// Eigenvector j as a WaveState (real amplitudes, t = 0).
  WaveState state(int j) const;
};

TridiagonalHamiltonian assemble_hamiltonian(const LatticeModel& model,
                                            const PotentialSpec& spec, double t);

/// Implicit-shift QL with eigenvector accumulation. Throws EigensolverError
/// (carrying the offending index) if an eigenvalue fails to converge within
/// 60 sweeps. Residuals are verified against 1e-10 * (|diag|_inf + 2).
SpectrumReport eigendecompose(const TridiagonalHamiltonian& h);

/// Number of eigenvalues strictly below `threshold`, from the Sturm sign
/// count of the LDL^T pivots of H - threshold*I.
int sturm_count_below(const TridiagonalHamiltonian& h, double threshold);

/// Finite-size level spacing scale at the band edge, 10/(2M+1)^2.
double band_edge_tolerance(const LatticeModel& model);

/// Flag states with E < -2 - band_edge_tolerance as bound and cross-check
/// against the participation ratio; disagreement between the two criteria
/// throws ClassificationError. Meant for wells that vanish at the edges.
SpectrumReport classify_bound_states(SpectrumReport report, const LatticeModel& model);

/// Bound levels of the continuum Poschl-Teller well referenced to the lattice
/// band bottom: E_n = -2 - (nu-n)^2/l^2 for n = 0..floor(nu). An integer nu
/// gets floor(nu) strictly bound levels plus a flagged zero-binding
/// threshold state.
struct PtLevels {
  std::vector<double> energies;
  bool threshold_state = false;
};
PtLevels pt_analytic_levels(double nu, double l);

/// 1 + floor(nu*) with nu* the boosted effective depth; the continuum
/// prediction for the bound-state count of the drifting well.
int predicted_bound_count(double nu, double v);

}  // namespace dwm
