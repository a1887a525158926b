#include <cmath>
#include <complex>

#include "doctest.h"
#include "dwm/boost.hpp"
#include "dwm/dynamics.hpp"
#include "dwm/spectral.hpp"
#include "oracles.hpp"

using namespace dwm;

namespace {

using Cplx = std::complex<double>;

WaveState pt_bound_state(const LatticeModel& model, double nu, int which) {
  PotentialSpec spec{PoschlTeller{nu, 5.0, 0.0}, 0.0};
  const auto rep = classify_bound_states(
      eigendecompose(assemble_hamiltonian(model, spec, 0.0)), model);
  REQUIRE(rep.bound_count() > which);
  return rep.state(which);
}

double l2_distance(const WaveState& a, const WaveState& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::norm(a.amplitudes[i] - b.amplitudes[i]);
  return std::sqrt(s);
}

double energy_expectation(const WaveState& c, const PotentialSpec& spec,
                          const LatticeModel& model) {
  const auto dc = rhs(c, spec, model);
  // H c = i * dc/dt
  Cplx e = 0.0;
  for (int i = 0; i < c.size(); ++i)
    e += std::conj(c.amplitudes[i]) * Cplx(0.0, 1.0) * dc[i];
  return e.real();
}

detail::ChainPropagator free_two_site() {
  detail::ChainPropagator prop;
  prop.sample_potential = [](double, std::vector<double>& v) { v.assign(2, 0.0); };
  return prop;
}

}  // namespace

TEST_CASE("rhs on a uniform state") {
  LatticeModel model{5, {}};
  WaveState c(11);
  for (auto& a : c.amplitudes) a = 1.0;
  PotentialSpec zero{Tabulated{std::vector<double>(11, 0.0)}, 0.0};
  const auto dc = rhs(c, zero, model);
  for (int i = 1; i < 10; ++i) {
    CHECK(dc[i].real() == doctest::Approx(0.0));
    CHECK(dc[i].imag() == doctest::Approx(2.0));  // interior: +2i c
  }
  CHECK(dc[0].imag() == doctest::Approx(1.0));  // one neighbor only
  CHECK(dc[10].imag() == doctest::Approx(1.0));
}

TEST_CASE("rhs of a single occupied site") {
  LatticeModel model{5, {}};
  WaveState c(11);
  c.at_site(0) = 1.0;
  PotentialSpec zero{Tabulated{std::vector<double>(11, 0.0)}, 0.0};
  const auto dc = rhs(c, zero, model);
  CHECK(std::abs(dc[c.index(0)]) == doctest::Approx(0.0));
  CHECK(dc[c.index(1)] == Cplx(0.0, 1.0));
  CHECK(dc[c.index(-1)] == Cplx(0.0, 1.0));
}

TEST_CASE("rhs conserves the norm with open ends") {
  LatticeModel model{20, {}};
  PotentialSpec spec{PoschlTeller{1.27, 5.0, 0.0}, 0.0};
  WaveState c(41);
  for (int i = 0; i < c.size(); ++i) {
    const double n = c.site(i);
    c.amplitudes[i] = Cplx(std::exp(-n * n / 30.0), 0.2 * std::sin(n));
  }
  const auto dc = rhs(c, spec, model);
  Cplx s = 0.0;
  for (int i = 0; i < c.size(); ++i) s += std::conj(c.amplitudes[i]) * dc[i];
  CHECK(std::abs(s.real()) < 1e-14);  // d/dt ||c||^2 = 2 Re<c, dc/dt> = 0
}

TEST_CASE("two-site closed form: accuracy at dt = 0.01") {
  auto prop = free_two_site();
  std::vector<Cplx> c = {1.0, 0.0};
  const double dt = 0.01;
  for (int k = 0; k < 100; ++k) prop.rk4(c, k * dt, dt);
  Cplx c1, c2;
  oracles::two_site_exact(1.0, c1, c2);
  CHECK(std::abs(c[0] - c1) < 1e-9);
  CHECK(std::abs(c[1] - c2) < 1e-9);
}

TEST_CASE("two-site closed form: local error drops ~32x per halving") {
  auto one_step_err = [&](double dt) {
    auto prop = free_two_site();
    std::vector<Cplx> c = {1.0, 0.0};
    prop.rk4(c, 0.0, dt);
    Cplx c1, c2;
    oracles::two_site_exact(dt, c1, c2);
    return std::max(std::abs(c[0] - c1), std::abs(c[1] - c2));
  };
  const double r = one_step_err(0.2) / one_step_err(0.1);
  CHECK(r > 24.0);
  CHECK(r < 40.0);
}

TEST_CASE("two-site closed form: global order 4") {
  auto global_err = [&](double dt) {
    auto prop = free_two_site();
    std::vector<Cplx> c = {1.0, 0.0};
    const int steps = static_cast<int>(std::llround(1.0 / dt));
    for (int k = 0; k < steps; ++k) prop.rk4(c, k * dt, dt);
    Cplx c1, c2;
    oracles::two_site_exact(1.0, c1, c2);
    return std::max(std::abs(c[0] - c1), std::abs(c[1] - c2));
  };
  const double p = std::log2(global_err(0.02) / global_err(0.01));
  CHECK(p == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("a constant potential only rotates the global phase") {
  LatticeModel model{10, {}};
  WaveState c0(21);
  for (int i = 0; i < c0.size(); ++i) {
    const double n = c0.site(i);
    c0.amplitudes[i] = std::exp(-n * n / 12.0);
  }
  c0 = normalized(std::move(c0));

  PotentialSpec zero{Tabulated{std::vector<double>(21, 0.0)}, 0.0};
  PotentialSpec shifted{Tabulated{std::vector<double>(21, 0.7)}, 0.0};
  WaveState a = c0, b = c0;
  for (int k = 0; k < 10; ++k) {
    a = rk4_step(a, zero, model, 0.01);
    b = rk4_step(b, shifted, model, 0.01);
    // moduli agree to 1e-12 per step taken
    for (int i = 0; i < a.size(); ++i)
      CHECK(std::abs(std::abs(a.amplitudes[i]) - std::abs(b.amplitudes[i])) <
            1e-12 * (k + 1));
  }
}

TEST_CASE("bound state stays put at rest") {
  LatticeModel model{200, {}};
  const auto phi = pt_bound_state(model, 0.97, 0);
  PotentialSpec spec{PoschlTeller{0.97, 5.0, 0.0}, 0.0};
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 20.0;
  cfg.record_stride = 500;
  const auto traj = evolve(phi, spec, model, cfg);
  CHECK(traj.series.back().localized_fraction > 0.99);
  CHECK(traj.max_norm_drift < 1e-9);
  CHECK(traj.boundary_clean);
  CHECK(traj.series.back().comoving_overlap > 0.999);
}

TEST_CASE("energy expectation is conserved in a static well") {
  LatticeModel model{100, {}};
  PotentialSpec spec{PoschlTeller{1.27, 5.0, 0.0}, 0.0};
  WaveState c(201);
  for (int i = 0; i < c.size(); ++i) {
    const double n = c.site(i);
    c.amplitudes[i] = std::exp(-n * n / 40.0) * Cplx(std::cos(0.2 * n), std::sin(0.2 * n));
  }
  c = normalized(std::move(c));
  const double e0 = energy_expectation(c, spec, model);
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 10.0;
  cfg.record_stride = 1000;
  const auto traj = evolve(c, spec, model, cfg);
  const double e1 = energy_expectation(traj.final_state(), spec, model);
  CHECK(std::abs(e1 - e0) < 1e-8);
}

TEST_CASE("time reversal recovers the initial state") {
  LatticeModel model{100, {}};
  PotentialSpec spec{PoschlTeller{0.97, 5.0, 0.0}, 0.0};
  WaveState c0(201);
  for (int i = 0; i < c0.size(); ++i) {
    const double n = c0.site(i);
    c0.amplitudes[i] = std::exp(-n * n / 25.0);
  }
  c0 = normalized(std::move(c0));

  WaveState c = c0;
  for (int k = 0; k < 1000; ++k) c = rk4_step(c, spec, model, 0.01);
  CHECK(c.time == doctest::Approx(10.0));
  for (int k = 0; k < 1000; ++k) c = rk4_step(c, spec, model, -0.01);
  CHECK(l2_distance(c, c0) < 1e-7);
}

TEST_CASE("norm guard trips when dt is too large") {
  LatticeModel model{200, {}};
  const auto phi = pt_bound_state(model, 0.97, 0);
  PotentialSpec spec{PoschlTeller{0.97, 5.0, 0.0}, 0.0};
  EvolutionConfig cfg;
  cfg.dt = 0.05;
  cfg.t_max = 20.0;
  cfg.record_stride = 100;
  CHECK_THROWS_WITH_AS(static_cast<void>(evolve(phi, spec, model, cfg)),
                       doctest::Contains("norm drift"), std::runtime_error);
}

TEST_CASE("evolve rejects bad inputs") {
  LatticeModel model{10, {}};
  WaveState c(21);
  c.at_site(0) = 2.0;  // unnormalized
  PotentialSpec spec{PoschlTeller{1.0, 5.0, 0.0}, 0.0};
  EvolutionConfig cfg;
  cfg.t_max = 1.0;
  CHECK_THROWS_AS(static_cast<void>(evolve(c, spec, model, cfg)), std::invalid_argument);

  EvolutionConfig big;
  big.dt = 0.1;  // fixed-mode cap is 0.05
  big.t_max = 1.0;
  CHECK_THROWS_AS(big.validate(), std::invalid_argument);
}

TEST_CASE("boundary flag trips when the packet reaches the edge zone") {
  LatticeModel model{30, {}};
  WaveState c(61);
  c.at_site(0) = 1.0;
  PotentialSpec spec{Tabulated{std::vector<double>(61, 0.0)}, 0.0};
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 20.0;  // ballistic front reaches the edge around t ~ 10
  cfg.record_stride = 100;
  const auto traj = evolve(c, spec, model, cfg);
  CHECK_FALSE(traj.boundary_clean);
}

TEST_CASE("absorbing layer drains the norm without tripping the guard") {
  LatticeModel model{30, AbsorbingLayer{8, 0.5}};
  WaveState c(61);
  c.at_site(0) = 1.0;
  PotentialSpec spec{Tabulated{std::vector<double>(61, 0.0)}, 0.0};
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 30.0;
  cfg.record_stride = 500;
  const auto traj = evolve(c, spec, model, cfg);
  CHECK(traj.series.back().norm_sq < 0.9);
  CHECK(traj.boundary_clean);  // the guard watches open boundaries only
}

TEST_CASE("trajectories depend continuously on the drift velocity near rest") {
  LatticeModel model{100, {}};
  const LatticeModel big{100, {}};
  PotentialSpec rest{PoschlTeller{1.27, 5.0, 0.0}, 0.0};
  const auto phi = pt_bound_state(big, 1.27, 0);

  auto run = [&](double v) {
    PotentialSpec spec{PoschlTeller{1.27, 5.0, 0.0}, v};
    WaveState init = v == 0.0 ? phi : boosted_initial_state(phi, solve_boost(-v));
    EvolutionConfig cfg;
    cfg.dt = 0.01;
    cfg.t_max = 5.0;
    cfg.record_stride = 100;
    return evolve(init, spec, model, cfg).final_state();
  };
  const auto base = run(0.0);
  const double d_small = l2_distance(run(1e-3), base);
  const double d_large = l2_distance(run(1e-1), base);
  CHECK(d_small < 0.02);
  CHECK(d_small < d_large);
}

TEST_CASE("adaptive mode reproduces the fixed-step result") {
  LatticeModel model{100, {}};
  const auto phi = pt_bound_state(model, 0.97, 0);
  PotentialSpec spec{PoschlTeller{0.97, 5.0, 0.0}, 0.25};

  EvolutionConfig fixed;
  fixed.dt = 0.005;
  fixed.t_max = 5.0;
  fixed.record_stride = 1000;

  EvolutionConfig adapt = fixed;
  adapt.dt = 0.02;  // initial guess only
  adapt.adaptive = AdaptiveTolerances{1e-10, 1e-12};
  adapt.record_stride = 1000000;  // endpoints only

  const auto a = evolve(phi, spec, model, fixed).final_state();
  const auto b = evolve(phi, spec, model, adapt).final_state();
  CHECK(l2_distance(a, b) < 1e-6);
}

TEST_CASE("adaptive mode handles a stiff edge potential that fixed dt cannot") {
  // A steep parabola makes the edge sites fast; the controller must cut the
  // step below the fixed-mode default to keep the norm.
  LatticeModel model{60, {}};
  PotentialSpec spec{Harmonic{0.05, 0.0}, 0.0};
  const auto bp = solve_boost(0.0);
  const auto init = harmonic_ground_state(model, 0.05, bp.mass_ratio, 0.0);

  EvolutionConfig cfg;
  cfg.dt = 0.02;
  cfg.adaptive = AdaptiveTolerances{1e-8, 1e-10};
  cfg.t_max = 2.0;
  cfg.record_stride = 1000000;
  const auto traj = evolve(init, spec, model, cfg);
  CHECK(traj.max_norm_drift < 1e-6);
  CHECK(traj.series.back().localized_fraction > 0.99);
}

TEST_CASE("adaptive step underflow is reported") {
  LatticeModel model{20, {}};
  WaveState c(41);
  c.at_site(0) = 1.0;
  // An enormous edge potential keeps rejecting steps until underflow.
  std::vector<double> v(41, 0.0);
  v[0] = v[40] = 1e9;
  PotentialSpec spec{Tabulated{v}, 0.0};
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.adaptive = AdaptiveTolerances{1e-12, 1e-14};
  cfg.t_max = 1.0;
  CHECK_THROWS_WITH_AS(static_cast<void>(evolve(c, spec, model, cfg)),
                       doctest::Contains("underflow"), std::runtime_error);
}

TEST_CASE("harmonic ground state widths") {
  LatticeModel model{100, {}};
  const auto g = harmonic_ground_state(model, 0.02, 1.0, 0.0);
  // c(n)/c(0) = exp(-n^2/(2 sigma^2)) with sigma^2 = sqrt(2/Omega) = 10
  const double ratio = std::abs(g.at_site(1)) / std::abs(g.at_site(0));
  const double sigma2 = -1.0 / (2.0 * std::log(ratio));
  CHECK(sigma2 == doctest::Approx(10.0).epsilon(1e-10));
  CHECK(parity_score(g, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

  const auto g2 = harmonic_ground_state(model, 0.02, 2.0, 0.0);
  const double r2 = std::abs(g2.at_site(1)) / std::abs(g2.at_site(0));
  CHECK(-1.0 / (2.0 * std::log(r2)) == doctest::Approx(5.0).epsilon(1e-10));

  CHECK_THROWS_AS(harmonic_ground_state(model, 200.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(harmonic_ground_state(model, 0.02, 11.0, 0.0), std::invalid_argument);
}

TEST_CASE("lifetime fit on synthetic series") {
  TrajectoryRecord traj;
  for (int k = 0; k <= 200; ++k) {
    SeriesPoint p{};
    p.t = 0.5 * k;
    p.comoving_overlap = std::exp(-p.t / 50.0);
    traj.series.push_back(p);
  }
  const auto fit = estimate_lifetime(traj, 10.0, 100.0);
  CHECK(fit.tau == doctest::Approx(50.0).epsilon(1e-3));
  CHECK(fit.r_squared > 0.999999);
}

TEST_CASE("lifetime fit reports a stationary state as infinite") {
  TrajectoryRecord traj;
  for (int k = 0; k <= 100; ++k) {
    SeriesPoint p{};
    p.t = 1.0 * k;
    p.comoving_overlap = 1.0 - 1e-9 * std::sin(0.1 * k);
    traj.series.push_back(p);
  }
  const auto fit = estimate_lifetime(traj, 10.0, 100.0);
  CHECK(std::isinf(fit.tau));
}

TEST_CASE("lifetime fit error paths") {
  TrajectoryRecord growing;
  for (int k = 0; k <= 100; ++k) {
    SeriesPoint p{};
    p.t = 1.0 * k;
    p.comoving_overlap = 0.5 + 0.004 * k;  // structured growth
    growing.series.push_back(p);
  }
  CHECK_THROWS_WITH_AS(static_cast<void>(estimate_lifetime(growing, 10.0, 100.0)),
                       doctest::Contains("no decaying"), std::runtime_error);

  TrajectoryRecord sparse;
  for (int k = 0; k < 10; ++k) {
    SeriesPoint p{};
    p.t = 1.0 * k;
    p.comoving_overlap = std::exp(-0.1 * k);
    sparse.series.push_back(p);
  }
  CHECK_THROWS_AS(static_cast<void>(estimate_lifetime(sparse, 0.0, 10.0)),
                  std::runtime_error);

  TrajectoryRecord negative;
  for (int k = 0; k <= 50; ++k) {
    SeriesPoint p{};
    p.t = 1.0 * k;
    p.comoving_overlap = (k == 25) ? 0.0 : 1.0;
    negative.series.push_back(p);
  }
  CHECK_THROWS_AS(static_cast<void>(estimate_lifetime(negative, 0.0, 50.0)),
                  std::runtime_error);
}

TEST_CASE("radiation tail norm") {
  LatticeModel model{200, {}};
  const auto phi = pt_bound_state(model, 0.97, 0);
  CHECK(radiation_tail_norm(phi, 0.0, 50.0) < 1e-6);

  WaveState u(401);
  for (auto& a : u.amplitudes) a = 1.0;
  CHECK(radiation_tail_norm(u, 0.0, 50.0) == doctest::Approx(0.75).epsilon(0.01));
}
