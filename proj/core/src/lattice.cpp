#include "dwm/lattice.hpp"

#include <cmath>

namespace dwm {

void PotentialSpec::validate() const {
  if (const auto* pt = std::get_if<PoschlTeller>(&shape)) {
    if (!(pt->nu > 0.0)) throw std::invalid_argument("Poschl-Teller nu must be > 0");
    if (!(pt->l > 0.0)) throw std::invalid_argument("Poschl-Teller l must be > 0");
  } else if (const auto* h = std::get_if<Harmonic>(&shape)) {
    if (!(h->omega > 0.0)) throw std::invalid_argument("harmonic Omega must be > 0");
  }
  if (!std::isfinite(drift_v)) throw std::invalid_argument("drift velocity must be finite");
}

double poschl_teller_value(double nu, double l, double x) {
  const double c = std::cosh(x / l);  // overflows to +inf far out; 1/inf = 0
  const double s = 1.0 / c;
  return -nu * (nu + 1.0) * (1.0 / (l * l)) * s * s;
}

double potential_center(const PotentialSpec& spec, double t) {
  double c0 = 0.0;
  if (const auto* pt = std::get_if<PoschlTeller>(&spec.shape)) c0 = pt->center0;
  if (const auto* h = std::get_if<Harmonic>(&spec.shape)) c0 = h->center0;
  return c0 - spec.drift_v * t;
}

std::vector<double> sample_potential(const PotentialSpec& spec,
                                     const LatticeModel& model, double t) {
  model.validate();
  spec.validate();
  const int m = model.half_width;
  std::vector<double> v(model.site_count());

  if (const auto* pt = std::get_if<PoschlTeller>(&spec.shape)) {
    for (int n = -m; n <= m; ++n) {
      const double x = static_cast<double>(n) + spec.drift_v * t - pt->center0;
      v[n + m] = poschl_teller_value(pt->nu, pt->l, x);
    }
  } else if (const auto* h = std::get_if<Harmonic>(&spec.shape)) {
    for (int n = -m; n <= m; ++n) {
      const double x = static_cast<double>(n) + spec.drift_v * t - h->center0;
      v[n + m] = 0.5 * h->omega * x * x;
    }
  } else {
    const auto& tab = std::get<Tabulated>(spec.shape);
    if (static_cast<int>(tab.samples.size()) != model.site_count())
      throw std::invalid_argument("tabulated potential length must equal 2M+1");
    if (spec.drift_v * t != 0.0)
      throw std::invalid_argument("tabulated wells do not drift (v*t != 0)");
    v = tab.samples;
  }
  return v;
}

std::vector<double> absorber_rates(const LatticeModel& model) {
  std::vector<double> g(model.site_count(), 0.0);
  if (!model.absorber) return g;
  const int m = model.half_width;
  const int w = model.absorber->width;
  const double s = model.absorber->strength;
  for (int n = -m; n <= m; ++n) {
    const int depth = std::abs(n) - (m - w);
    if (depth > 0) g[n + m] = s * static_cast<double>(depth) / w;
  }
  return g;
}

}  // namespace dwm
