#include "dwm/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace dwm {
namespace detail {

void ChainPropagator::derivative(const std::vector<std::complex<double>>& c,
                                 const std::vector<double>& v,
                                 std::vector<std::complex<double>>& dc) const {
  const int n = static_cast<int>(c.size());
  dc.resize(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> h = v[i] * c[i];
    if (i > 0) h -= c[i - 1];
    if (i + 1 < n) h -= c[i + 1];
    dc[i] = std::complex<double>(h.imag(), -h.real());  // -i * h
    if (!gamma.empty()) dc[i] -= gamma[i] * c[i];
  }
}

void ChainPropagator::rk4(std::vector<std::complex<double>>& c, double t, double dt) {
  const std::size_t n = c.size();
  sample_potential(t, v_begin_);
  sample_potential(t + 0.5 * dt, v_mid_);
  sample_potential(t + dt, v_end_);

  derivative(c, v_begin_, k1_);
  tmp_.resize(n);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = c[i] + 0.5 * dt * k1_[i];
  derivative(tmp_, v_mid_, k2_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = c[i] + 0.5 * dt * k2_[i];
  derivative(tmp_, v_mid_, k3_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = c[i] + dt * k3_[i];
  derivative(tmp_, v_end_, k4_);

  const double w = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i)
    c[i] += w * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
}

}  // namespace detail

namespace {

detail::ChainPropagator make_propagator(const PotentialSpec& spec,
                                        const LatticeModel& model) {
  detail::ChainPropagator prop;
  prop.sample_potential = [&spec, &model](double t, std::vector<double>& v) {
    v = sample_potential(spec, model, t);
  };
  if (model.absorber) prop.gamma = absorber_rates(model);
  return prop;
}

}  // namespace

void EvolutionConfig::validate() const {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (adaptive) {
    if (!(adaptive->rel > 0.0) || !(adaptive->abs > 0.0))
      throw std::invalid_argument("adaptive tolerances must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("initial dt must be > 0");
  } else {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (dt > 0.05)
      throw std::invalid_argument("fixed dt is capped at 0.05/kappa");
  }
}

std::vector<std::complex<double>> rhs(const WaveState& state,
                                      const PotentialSpec& spec,
                                      const LatticeModel& model) {
  if (state.size() != model.site_count())
    throw std::invalid_argument("rhs: state length does not match the lattice");
  const auto v = sample_potential(spec, model, state.time);
  detail::ChainPropagator prop;
  if (model.absorber) prop.gamma = absorber_rates(model);
  std::vector<std::complex<double>> dc;
  prop.derivative(state.amplitudes, v, dc);
  return dc;
}

WaveState rk4_step(const WaveState& state, const PotentialSpec& spec,
                   const LatticeModel& model, double dt) {
  if (!(dt != 0.0)) throw std::invalid_argument("rk4_step: dt must be nonzero");
  if (state.size() != model.site_count())
    throw std::invalid_argument("rk4_step: state length does not match the lattice");
  auto prop = make_propagator(spec, model);
  WaveState out = state;
  prop.rk4(out.amplitudes, out.time, dt);
  out.time += dt;
  return out;
}

TrajectoryRecord evolve(const WaveState& state0, const PotentialSpec& spec,
                        const LatticeModel& model, const EvolutionConfig& cfg) {
  cfg.validate();
  model.validate();
  if (state0.size() != model.site_count())
    throw std::invalid_argument("evolve: state length does not match the lattice");
  if (std::abs(norm_sq(state0) - 1.0) > 1e-9)
    throw std::invalid_argument("evolve: initial state must be normalized");

  auto prop = make_propagator(spec, model);
  const bool open_bc = !model.absorber.has_value();

  TrajectoryRecord traj;
  WaveState cur = state0;
  cur.time = 0.0;

  auto record = [&](double t) {
    cur.time = t;
    const double xc = potential_center(spec, t);
    SeriesPoint p;
    p.t = t;
    p.norm_sq = norm_sq(cur);
    p.localized_fraction = localized_fraction(cur, xc, cfg.loc_half_window);
    WaveState ref;
    if (cfg.reference) {
      ref = cfg.reference(t);
    } else {
      const double shift = xc - potential_center(spec, 0.0);
      ref = shifted_by_sites(state0, static_cast<int>(std::llround(shift)));
    }
    const double ref_nsq = norm_sq(ref);
    p.comoving_overlap =
        ref_nsq > 0.0 ? std::norm(inner_product(ref, cur)) / ref_nsq : 0.0;
    p.center_of_mass = center_of_mass(cur);
    p.tail_norm = 1.0 - localized_fraction(cur, xc, cfg.tail_half_window);
    traj.series.push_back(p);
    traj.snapshots.push_back(cur);

    traj.max_norm_drift =
        std::max(traj.max_norm_drift, std::abs(std::sqrt(p.norm_sq) - 1.0));
    if (open_bc && edge_occupancy(cur, 10) > 1e-4) traj.boundary_clean = false;
  };

  auto check_norm = [&](double t) {
    const double drift = std::abs(std::sqrt(norm_sq(cur)) - 1.0);
    if (open_bc && drift > 1e-6)
      throw std::runtime_error("evolve: norm drift " + std::to_string(drift) +
                               " at t = " + std::to_string(t) +
                               " exceeds 1e-6 (dt too large)");
  };

  record(0.0);

  if (!cfg.adaptive) {
    const long long steps = std::llround(cfg.t_max / cfg.dt);
    if (steps < 1) throw std::invalid_argument("evolve: t_max shorter than one step");
    for (long long k = 0; k < steps; ++k) {
      prop.rk4(cur.amplitudes, k * cfg.dt, cfg.dt);
      const double t = (k + 1) * cfg.dt;
      check_norm(t);
      if ((k + 1) % cfg.record_stride == 0 || k + 1 == steps) record(t);
    }
  } else {
    constexpr double dt_min = 1e-6;
    const double rel = cfg.adaptive->rel;
    const double abs_tol = cfg.adaptive->abs;
    double h = cfg.dt;
    double t = 0.0;
    long long accepted = 0;
    std::vector<std::complex<double>> full, half;
    while (t < cfg.t_max - 1e-12) {
      if (h < dt_min && cfg.t_max - t > dt_min)
        throw std::runtime_error("evolve: adaptive step underflow below 1e-6");
      h = std::min(h, cfg.t_max - t);
      full = cur.amplitudes;
      prop.rk4(full, t, h);
      half = cur.amplitudes;
      prop.rk4(half, t, 0.5 * h);
      prop.rk4(half, t + 0.5 * h, 0.5 * h);

      // Step-doubling error estimate: |y_half - y_full|/15 per component.
      double err = 0.0;
      for (std::size_t i = 0; i < half.size(); ++i) {
        const double scale =
            abs_tol + rel * std::max(std::abs(half[i]), std::abs(cur.amplitudes[i]));
        err = std::max(err, std::abs(half[i] - full[i]) / (15.0 * scale));
      }
      if (err <= 1.0) {
        cur.amplitudes = half;
        t += h;
        ++accepted;
        check_norm(t);
        if (accepted % cfg.record_stride == 0 || t >= cfg.t_max - 1e-12) record(t);
      }
      const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::min(5.0, std::max(0.2, fac));
    }
    if (traj.series.back().t < cfg.t_max - 1e-9) record(t);
  }
  return traj;
}

WaveState harmonic_ground_state(const LatticeModel& model, double omega,
                                double mass_ratio, double center) {
  model.validate();
  if (!(omega > 0.0)) throw std::invalid_argument("harmonic_ground_state: Omega must be > 0");
  if (!(mass_ratio >= 1.0))
    throw std::invalid_argument("harmonic_ground_state: mass ratio must be >= 1");
  const double sigma2 = (1.0 / mass_ratio) * std::sqrt(2.0 / omega);
  if (std::sqrt(sigma2) < 1.0)
    throw std::invalid_argument("harmonic_ground_state: width below one lattice site");
  WaveState s(model.site_count());
  for (int i = 0; i < s.size(); ++i) {
    const double x = s.site(i) - center;
    s.amplitudes[i] = std::exp(-x * x / (2.0 * sigma2));
  }
  return normalized(std::move(s));
}

LifetimeFit estimate_lifetime(const TrajectoryRecord& traj, double t1, double t2) {
  if (!(t2 > t1)) throw std::invalid_argument("estimate_lifetime: empty fit window");
  std::vector<double> ts, ys;
  double ov_min = std::numeric_limits<double>::infinity(), ov_max = 0.0;
  for (const auto& p : traj.series) {
    if (p.t < t1 - 1e-12 || p.t > t2 + 1e-12) continue;
    if (!(p.comoving_overlap > 0.0))
      throw std::runtime_error("estimate_lifetime: non-positive overlap in fit window");
    ts.push_back(p.t);
    ys.push_back(std::log(p.comoving_overlap));
    ov_min = std::min(ov_min, p.comoving_overlap);
    ov_max = std::max(ov_max, p.comoving_overlap);
  }
  if (ts.size() < 20)
    throw std::runtime_error("estimate_lifetime: fewer than 20 points in fit window");

  const double n = static_cast<double>(ts.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
  }
  const double tm = st / n, ym = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - tm) * (ts[i] - tm);
    sxy += (ts[i] - tm) * (ys[i] - ym);
    syy += (ys[i] - ym) * (ys[i] - ym);
  }
  const double slope = sxy / sxx;

  LifetimeFit fit;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - (ym + slope * (ts[i] - tm));
    ss_res += r * r;
  }
  fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;

  constexpr double tau_cap = 1e9;
  if (slope < 0.0) {
    const double tau = -1.0 / slope;
    fit.tau = (tau > tau_cap) ? std::numeric_limits<double>::infinity() : tau;
    return fit;
  }
  // Non-decaying window: a flat series is a stationary state (tau -> inf),
  // anything with structure has no exponential regime to fit.
  if (ov_max / ov_min <= 1.0 + 1e-3) {
    fit.tau = std::numeric_limits<double>::infinity();
    return fit;
  }
  throw std::runtime_error("estimate_lifetime: no decaying overlap regime in fit window");
}

double radiation_tail_norm(const WaveState& state, double center, double half_window) {
  return 1.0 - localized_fraction(state, center, half_window);
}

}  // namespace dwm
