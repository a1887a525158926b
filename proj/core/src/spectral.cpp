#include "dwm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dwm/boost.hpp"

namespace dwm {
namespace {

constexpr int kMaxSweeps = 60;

/// Implicit-shift QL for a symmetric tridiagonal matrix, after the classic
/// EISPACK tql2 routine. d holds the diagonal, e[i] couples sites (i, i+1)
/// with e[n-1] = 0, z is the row-major eigenvector accumulator (identity on
/// entry, column j holds eigenvector j on exit).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                    std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > kMaxSweeps)
          throw EigensolverError(l, "QL sweep cap exceeded at eigenvalue index " +
                                        std::to_string(l));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {  // underflow guard: split the matrix and retry
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z[k * n + i + 1];
            z[k * n + i + 1] = s * z[k * n + i] + c * f;
            z[k * n + i] = c * z[k * n + i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> TridiagonalHamiltonian::apply(const std::vector<double>& x) const {
  const int n = size();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += offdiag * x[i - 1];
    if (i + 1 < n) s += offdiag * x[i + 1];
    y[i] = s;
  }
  return y;
}

EigensolverError::EigensolverError(int index, const std::string& what)
    : std::runtime_error(what), index_(index) {}

int SpectrumReport::bound_count() const {
  return static_cast<int>(std::count(bound.begin(), bound.end(), true));
}

WaveState SpectrumReport::state(int j) const {
  const auto& v = eigenvectors.at(j);
  WaveState s(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) s.amplitudes[i] = v[i];
  return s;
}

TridiagonalHamiltonian assemble_hamiltonian(const LatticeModel& model,
                                            const PotentialSpec& spec, double t) {
  return TridiagonalHamiltonian(sample_potential(spec, model, t));
}

SpectrumReport eigendecompose(const TridiagonalHamiltonian& h) {
  const int n = h.size();
  if (n < 1) throw std::invalid_argument("eigendecompose: empty Hamiltonian");

  std::vector<double> d = h.diag;
  std::vector<double> e(n, TridiagonalHamiltonian::offdiag);
  e[n - 1] = 0.0;  // e[i] couples (i, i+1)
  std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] = 1.0;

  tridiagonal_ql(d, e, z);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  SpectrumReport rep;
  rep.eigenvalues.resize(n);
  rep.eigenvectors.assign(n, std::vector<double>(n));
  rep.participation.resize(n);
  rep.parity.resize(n);
  rep.bound.assign(n, false);

  double scale = 0.0;
  for (double v : h.diag) scale = std::max(scale, std::abs(v));
  scale += 2.0 * kHopping;

  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    rep.eigenvalues[j] = d[src];
    auto& vec = rep.eigenvectors[j];
    for (int i = 0; i < n; ++i) vec[i] = z[static_cast<std::size_t>(i) * n + src];

    // Deterministic sign: the largest-magnitude component is positive.
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(vec[i]) > std::abs(vec[imax])) imax = i;
    if (vec[imax] < 0.0)
      for (auto& x : vec) x = -x;

    double p2 = 0.0, p4 = 0.0, par = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = vec[i] * vec[i];
      p2 += w;
      p4 += w * w;
      par += vec[i] * vec[n - 1 - i];
    }
    rep.participation[j] = p2 * p2 / p4;
    rep.parity[j] = par / p2;

    const auto hv = h.apply(vec);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = hv[i] - rep.eigenvalues[j] * vec[i];
      res += r * r;
    }
    res = std::sqrt(res);
    rep.max_residual = std::max(rep.max_residual, res);
    if (res > 1e-10 * scale)
      throw EigensolverError(j, "eigenpair residual " + std::to_string(res) +
                                    " exceeds budget at index " + std::to_string(j));
  }
  return rep;
}

int sturm_count_below(const TridiagonalHamiltonian& h, double threshold) {
  // Negative-pivot count of the LDL^T factorization of H - threshold*I;
  // off-diagonal is -kappa, so e^2 = 1.
  const int n = h.size();
  constexpr double tiny = 1e-300;
  int count = 0;
  double q = 1.0;
  for (int i = 0; i < n; ++i) {
    q = (i == 0) ? h.diag[0] - threshold : h.diag[i] - threshold - 1.0 / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double band_edge_tolerance(const LatticeModel& model) {
  const double n = model.site_count();
  return 10.0 / (n * n);
}

SpectrumReport classify_bound_states(SpectrumReport report, const LatticeModel& model) {
  const double threshold = -kBandHalfWidth - band_edge_tolerance(model);
  // Weakly bound states can spread over ~(binding)^{-1/2} sites, so the
  // localization cross-check uses a quarter of the chain, still far below
  // the R ~ 2(2M+1)/3 of extended box states.
  const double r_cut = 0.25 * model.site_count();
  for (int j = 0; j < report.size(); ++j) {
    const bool by_energy = report.eigenvalues[j] < threshold;
    const bool by_participation = report.participation[j] < r_cut;
    if (by_energy != by_participation)
      throw ClassificationError(
          "bound-state criteria disagree at index " + std::to_string(j) +
          " (E = " + std::to_string(report.eigenvalues[j]) +
          ", R = " + std::to_string(report.participation[j]) +
          "): lattice too small or state too shallow");
    report.bound[j] = by_energy;
  }
  return report;
}

PtLevels pt_analytic_levels(double nu, double l) {
  if (!(nu > 0.0) || !(l > 0.0))
    throw std::invalid_argument("pt_analytic_levels: nu and l must be > 0");
  PtLevels out;
  const double fl = std::floor(nu);
  const bool integer_nu = (nu == fl);
  // An integer nu puts the last level exactly at zero binding; it is not a
  // bound state, only a flagged threshold state.
  const int n_levels = integer_nu ? static_cast<int>(fl) : static_cast<int>(fl) + 1;
  out.threshold_state = integer_nu;
  for (int k = 0; k < n_levels; ++k) {
    const double kappa_d = (nu - k) / l;
    out.energies.push_back(-kBandHalfWidth - kappa_d * kappa_d);
  }
  return out;
}

int predicted_bound_count(double nu, double v) {
  const BoostParameters bp = solve_boost(v);
  if (!std::isfinite(bp.mass_ratio))
    throw std::domain_error("predicted_bound_count: diverges at the critical velocity");
  return 1 + static_cast<int>(std::floor(effective_depth(nu, bp.mass_ratio)));
}

}  // namespace dwm
