// dwm: command-line driver for the discrete-wave-mechanics workbench.
//
// Exit codes: 0 success, 1 error, 2 completed but physics-validity flagged
// (radiation reached the open boundary zone during a run).

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dwm/boost.hpp"
#include "dwm/csv_io.hpp"
#include "dwm/dynamics.hpp"
#include "dwm/scenarios.hpp"
#include "dwm/spectral.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

json boost_json(const dwm::BoostParameters& bp) {
  json j;
  j["v"] = bp.v;
  j["qa"] = bp.qa;
  j["sin_qa"] = bp.sin_qa();
  j["gamma"] = bp.gamma;
  j["mass_ratio"] = bp.mass_ratio;
  return j;
}

void write_or_print(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    dwm::write_text_file(out, text);
  }
}

std::string curve_csv(const std::string& header, double k_min, double k_max, double dk,
                      const std::function<double(double)>& f) {
  if (!(dk > 0.0) || !(k_max > k_min)) throw std::invalid_argument("bad k range");
  std::string text = header;
  const long long steps = static_cast<long long>((k_max - k_min) / dk + 1e-9);
  for (long long i = 0; i <= steps; ++i) {
    const double k = k_min + i * dk;
    text += dwm::fmt17(k) + "," + dwm::fmt17(f(k)) + "\n";
  }
  return text;
}

int run_spectrum(int sites, double nu, double ratio, double omega_a2, double threshold,
                 bool have_threshold, const std::vector<int>& dump,
                 const std::string& out_dir) {
  dwm::LatticeModel model{(sites - 1) / 2, {}};
  const bool harmonic = omega_a2 > 0.0;
  dwm::PotentialSpec spec = harmonic
      ? dwm::PotentialSpec{dwm::Harmonic{omega_a2, 0.0}, 0.0}
      : dwm::PotentialSpec{dwm::PoschlTeller{nu, 1.0 / ratio, 0.0}, 0.0};

  const auto h = dwm::assemble_hamiltonian(model, spec, 0.0);
  auto report = dwm::eigendecompose(h);
  // Band-edge classification only makes sense for wells that vanish at the
  // edges; the harmonic well keeps the default all-false flags.
  if (!harmonic) report = dwm::classify_bound_states(std::move(report), model);

  const double thr =
      have_threshold ? threshold : -dwm::kBandHalfWidth - dwm::band_edge_tolerance(model);

  std::filesystem::create_directories(out_dir);
  std::string text = "# index,eigenvalue,R,bound,parity\n";
  for (int j = 0; j < report.size(); ++j) {
    text += std::to_string(j) + "," + dwm::fmt17(report.eigenvalues[j]) + "," +
            dwm::fmt17(report.participation[j]) + "," + (report.bound[j] ? "1" : "0") +
            "," + dwm::fmt17(report.parity[j]) + "\n";
  }
  dwm::write_text_file(std::filesystem::path(out_dir) / "spectrum.csv", text);
  for (int j : dump) {
    if (j < 0 || j >= report.size()) throw std::invalid_argument("state index out of range");
    dwm::write_wave_state_csv(
        std::filesystem::path(out_dir) / ("state_" + std::to_string(j) + ".csv"),
        report.state(j));
  }

  json s;
  s["sites"] = sites;
  s["bound_count"] = report.bound_count();
  s["min_eigenvalue"] = report.eigenvalues.front();
  s["max_eigenvalue"] = report.eigenvalues.back();
  s["sturm_count_below_threshold"] = dwm::sturm_count_below(h, thr);
  s["threshold"] = thr;
  s["max_residual"] = report.max_residual;
  std::cout << s.dump(2) << "\n";
  return 0;
}

int run_evolve(const std::string& potential, int sites, double nu, double ratio,
               double omega_a2, double velocity, double center0, const std::string& init,
               const std::string& boost_phase, double dt, double tmax, int stride,
               bool adaptive, double rel_tol, double abs_tol, double loc_window,
               double tail_window, const std::string& out_dir) {
  dwm::LatticeModel model{(sites - 1) / 2, {}};
  const bool harmonic = potential == "harmonic";
  if (!harmonic && potential != "pt")
    throw std::invalid_argument("--potential must be pt or harmonic");

  const auto bp = dwm::solve_boost(velocity);
  dwm::WaveState state;
  if (init.rfind("file:", 0) == 0) {
    state = dwm::normalized(dwm::read_wave_state_csv(init.substr(5)));
  } else if (harmonic) {
    if (init != "ground")
      throw std::invalid_argument("harmonic runs support --init ground or file:<path>");
    state = dwm::harmonic_ground_state(model, omega_a2, bp.mass_ratio, center0);
  } else {
    dwm::PotentialSpec rest{dwm::PoschlTeller{nu, 1.0 / ratio, center0}, 0.0};
    const auto report = dwm::classify_bound_states(
        dwm::eigendecompose(dwm::assemble_hamiltonian(model, rest, 0.0)), model);
    const int want = init == "ground" ? 0 : (init == "excited" ? 1 : -1);
    if (want < 0) throw std::invalid_argument("--init must be ground, excited or file:<path>");
    if (report.bound_count() <= want)
      throw std::runtime_error("well has no " + init + " bound state");
    state = report.state(want);
  }
  if (boost_phase == "auto") {
    if (velocity != 0.0)
      state = dwm::boosted_initial_state(state, dwm::solve_boost(-velocity));
  } else if (boost_phase != "none") {
    throw std::invalid_argument("--boost-phase must be auto or none");
  }
  state = dwm::normalized(std::move(state));

  dwm::PotentialSpec spec = harmonic
      ? dwm::PotentialSpec{dwm::Harmonic{omega_a2, center0}, velocity}
      : dwm::PotentialSpec{dwm::PoschlTeller{nu, 1.0 / ratio, center0}, velocity};

  dwm::EvolutionConfig cfg;
  cfg.dt = dt;
  if (adaptive) cfg.adaptive = dwm::AdaptiveTolerances{rel_tol, abs_tol};
  cfg.t_max = tmax;
  cfg.record_stride = stride;
  cfg.loc_half_window = loc_window;
  cfg.tail_half_window = tail_window;
  const auto traj = dwm::evolve(state, spec, model, cfg);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  dwm::write_series_csv(dir / "series.csv", traj.series);
  dwm::write_snapshots_csv(dir / "snapshots.csv", traj.snapshots);
  dwm::write_wave_state_csv(dir / "state_initial.csv", state);
  dwm::write_wave_state_csv(dir / "state_final.csv", traj.final_state());
  dwm::write_text_file(dir / "plot.gp",
                       "# gnuplot script: |c_n(t)| map and observable series\n"
                       "set datafile separator comma\n"
                       "set terminal pngcairo size 900,600\n"
                       "set output 'snapshots.png'\n"
                       "plot 'snapshots.csv' matrix with image notitle\n"
                       "set output 'series.png'\n"
                       "set key bottom left\n"
                       "plot 'series.csv' using 1:3 with lines title 'localized fraction', \\\n"
                       "     'series.csv' using 1:4 with lines title 'overlap', \\\n"
                       "     'series.csv' using 1:6 with lines title 'tail'\n");

  json s;
  s["final_localized_fraction"] = traj.series.back().localized_fraction;
  s["final_norm_sq"] = traj.series.back().norm_sq;
  s["max_norm_drift"] = traj.max_norm_drift;
  s["boundary_clean"] = traj.boundary_clean;
  s["snapshots"] = traj.snapshots.size();
  std::cout << s.dump(2) << "\n";
  return traj.boundary_clean ? 0 : 2;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::string tok;
  std::istringstream ss(csv);
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dwm: bound states and wave-packet dynamics of drifting potential "
               "wells on a tight-binding lattice (hbar = a = kappa = 1)"};
  app.require_subcommand(1);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  // boost
  double b_v = 0.0;
  auto* cmd_boost = app.add_subcommand("boost", "Galilean-boost constants for a drift velocity");
  cmd_boost->add_option("--velocity,-v", b_v, "drift velocity in kappa*a")->required();

  // dispersion / wk
  double d_v = 0.0, d_kmin = -kTwoPi, d_kmax = kTwoPi, d_dk = kTwoPi / 400.0;
  std::string d_out;
  auto* cmd_disp = app.add_subcommand("dispersion", "Moving-frame dispersion E(k) as CSV");
  cmd_disp->add_option("--velocity,-v", d_v, "drift velocity in kappa*a")->required();
  cmd_disp->add_option("--k-min", d_kmin, "range start (1/a)");
  cmd_disp->add_option("--k-max", d_kmax, "range end (1/a)");
  cmd_disp->add_option("--dk", d_dk, "step (1/a)");
  cmd_disp->add_option("--out", d_out, "output file (stdout when omitted)");

  double w_v = 0.0, w_kmin = -kTwoPi, w_kmax = kTwoPi, w_dk = kTwoPi / 400.0;
  std::string w_out;
  auto* cmd_wk = app.add_subcommand("wk", "Momentum-space potential W(k) as CSV");
  cmd_wk->add_option("--velocity,-v", w_v, "drift velocity in kappa*a")->required();
  cmd_wk->add_option("--k-min", w_kmin, "range start (1/a)");
  cmd_wk->add_option("--k-max", w_kmax, "range end (1/a)");
  cmd_wk->add_option("--dk", w_dk, "step (1/a)");
  cmd_wk->add_option("--out", w_out, "output file (stdout when omitted)");

  // spectrum
  int s_sites = 401;
  double s_nu = 0.97, s_ratio = 0.2, s_omega = 0.0, s_threshold = 0.0;
  std::vector<int> s_dump;
  std::string s_out = ".";
  auto* cmd_spec = app.add_subcommand("spectrum", "Eigenvalues, participation ratios and bound states of the static well");
  cmd_spec->add_option("--sites", s_sites, "odd site count 2M+1");
  cmd_spec->add_option("--nu", s_nu, "Poschl-Teller strength");
  cmd_spec->add_option("--ratio", s_ratio, "a/l");
  cmd_spec->add_option("--omega-a2", s_omega, "harmonic Omega a^2 (selects the harmonic well)");
  auto* thr_opt = cmd_spec->add_option("--threshold", s_threshold, "Sturm-count threshold (default: band edge)");
  cmd_spec->add_option("--dump-states", s_dump, "eigenvector indices to dump")->delimiter(',');
  cmd_spec->add_option("--out", s_out, "output directory");

  // evolve
  std::string e_pot = "pt", e_init = "ground", e_boost = "auto", e_out = "evolve-out";
  int e_sites = 401, e_stride = 100;
  double e_nu = 0.97, e_ratio = 0.2, e_omega = 0.02, e_v = 0.0, e_center0 = 0.0;
  double e_dt = 0.01, e_tmax = 200.0, e_rel = 1e-8, e_abs = 1e-10;
  double e_locw = 30.0, e_tailw = 25.0;
  bool e_adaptive = false;
  auto* cmd_ev = app.add_subcommand("evolve", "Propagate a wave packet in a (possibly drifting) well");
  cmd_ev->add_option("--potential", e_pot, "pt | harmonic");
  cmd_ev->add_option("--sites", e_sites, "odd site count 2M+1");
  cmd_ev->add_option("--nu", e_nu, "Poschl-Teller strength");
  cmd_ev->add_option("--ratio", e_ratio, "a/l");
  cmd_ev->add_option("--omega-a2", e_omega, "harmonic Omega a^2");
  cmd_ev->add_option("--velocity", e_v, "drift velocity in kappa*a");
  cmd_ev->add_option("--center0", e_center0, "well center at t=0 (units of a)");
  cmd_ev->add_option("--init", e_init, "ground | excited | file:<path>");
  cmd_ev->add_option("--boost-phase", e_boost, "auto | none (co-moving phase on the packet)");
  cmd_ev->add_option("--dt", e_dt, "time step (1/kappa)");
  cmd_ev->add_option("--tmax", e_tmax, "final time (1/kappa)");
  cmd_ev->add_option("--stride", e_stride, "steps between recorded snapshots");
  cmd_ev->add_flag("--adaptive", e_adaptive, "step-doubling adaptive mode");
  cmd_ev->add_option("--rel-tol", e_rel, "adaptive relative tolerance");
  cmd_ev->add_option("--abs-tol", e_abs, "adaptive absolute tolerance");
  cmd_ev->add_option("--loc-window", e_locw, "localized-fraction half window (a)");
  cmd_ev->add_option("--tail-window", e_tailw, "tail-norm half window (a)");
  cmd_ev->add_option("--out", e_out, "output directory");

  // figure
  std::string f_id, f_out = ".", f_format = "both", f_config, f_potential = "pt";
  std::vector<std::string> f_sets;
  auto* cmd_fig = app.add_subcommand("figure", "Run a named turn-key scenario");
  cmd_fig->add_option("id", f_id, "fig2|fig3|fig4a..d|fig5a..c|custom")->required();
  cmd_fig->add_option("--out", f_out, "output directory");
  cmd_fig->add_option("--format", f_format, "csv | json | both");
  cmd_fig->add_option("--config", f_config, "JSON config file (flags win)");
  cmd_fig->add_option("--set", f_sets, "override key=value (sites,nu,ratio,velocity,omega_a2,dt,tmax,stride,center0)");
  cmd_fig->add_option("--potential", f_potential, "custom scenario potential: pt | harmonic");

  // sweep
  std::string sw_nu = "0.97", sw_v = "0,0.75,1.5", sw_out;
  int sw_sites = 401;
  double sw_ratio = 0.2, sw_tmax = 60.0, sw_dt = 0.01;
  auto* cmd_sweep = app.add_subcommand("sweep", "Predicted vs measured bound-state counts over a (nu, v) grid");
  cmd_sweep->add_option("--nu", sw_nu, "comma list of nu values");
  cmd_sweep->add_option("--v", sw_v, "comma list of drift velocities");
  cmd_sweep->add_option("--sites", sw_sites, "odd site count");
  cmd_sweep->add_option("--ratio", sw_ratio, "a/l");
  cmd_sweep->add_option("--tmax", sw_tmax, "probe horizon (1/kappa)");
  cmd_sweep->add_option("--dt", sw_dt, "probe time step");
  cmd_sweep->add_option("--out", sw_out, "output CSV file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_boost) {
      std::cout << boost_json(dwm::solve_boost(b_v)).dump(2) << "\n";
      return 0;
    }
    if (*cmd_disp) {
      const auto bp = dwm::solve_boost(d_v);
      write_or_print(d_out, curve_csv("# k,E\n", d_kmin, d_kmax, d_dk,
                                      [&](double k) { return dwm::dispersion(k, bp); }));
      return 0;
    }
    if (*cmd_wk) {
      write_or_print(w_out, curve_csv("# k,W\n", w_kmin, w_kmax, w_dk, [&](double k) {
                       return dwm::momentum_potential(k, w_v);
                     }));
      return 0;
    }
    if (*cmd_spec) {
      return run_spectrum(s_sites, s_nu, s_ratio, s_omega, s_threshold,
                          thr_opt->count() > 0, s_dump, s_out);
    }
    if (*cmd_ev) {
      return run_evolve(e_pot, e_sites, e_nu, e_ratio, e_omega, e_v, e_center0, e_init,
                        e_boost, e_dt, e_tmax, e_stride, e_adaptive, e_rel, e_abs,
                        e_locw, e_tailw, e_out);
    }
    if (*cmd_fig) {
      dwm::ScenarioConfig cfg;
      if (!f_config.empty()) {
        std::ifstream in(f_config);
        if (!in) throw std::runtime_error("cannot open config: " + f_config);
        json j;
        in >> j;
        if (j.contains("id")) cfg.id = dwm::parse_figure_id(j["id"].get<std::string>());
        if (j.contains("overrides"))
          for (const auto& [k, v] : j["overrides"].items())
            cfg.overrides[k] = v.get<double>();
        if (j.contains("potential")) cfg.custom_potential = j["potential"].get<std::string>();
        if (j.contains("formats")) {
          cfg.write_csv = cfg.write_json = false;
          for (const auto& f : j["formats"]) {
            if (f == "csv") cfg.write_csv = true;
            if (f == "json") cfg.write_json = true;
          }
        }
      }
      cfg.id = dwm::parse_figure_id(f_id);
      cfg.output_dir = f_out;
      if (cmd_fig->count("--potential") > 0) cfg.custom_potential = f_potential;
      if (f_format == "csv") {
        cfg.write_csv = true;
        cfg.write_json = false;
      } else if (f_format == "json") {
        cfg.write_csv = false;
        cfg.write_json = true;
      } else if (f_format == "both") {
        cfg.write_csv = cfg.write_json = true;
      } else {
        throw std::invalid_argument("--format must be csv, json or both");
      }
      for (const auto& kv : f_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
        cfg.overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      }
      const auto result = dwm::run_scenario(cfg);
      std::cout << result.summary_json;
      return result.valid ? 0 : 2;
    }
    if (*cmd_sweep) {
      dwm::SweepOptions opt;
      opt.sites = sw_sites;
      opt.ratio = sw_ratio;
      opt.t_max = sw_tmax;
      opt.dt = sw_dt;
      const auto rows = dwm::sweep(parse_list(sw_nu), parse_list(sw_v), opt);
      write_or_print(sw_out, dwm::sweep_csv(rows));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
