#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dwm/boost.hpp"
#include "dwm/dynamics.hpp"
#include "dwm/spectral.hpp"

namespace dwm {

enum class FigureId { Fig2, Fig3, Fig4a, Fig4b, Fig4c, Fig4d, Fig5a, Fig5b, Fig5c, Custom };

FigureId parse_figure_id(const std::string& name);
std::string figure_id_name(FigureId id);

/// A turn-key run of one of the named reference figures, or a custom setup.
/// Built-in defaults: Fig2/3 at 401 sites, a/l = 0.2, nu = 0.97 / 1.27;
/// Fig4 at kt = 200, dt = 0.01, v = 0 or 1.5 (moving wells start at site
/// +150); Fig5 at Omega a^2 = 0.02, well at site 70, kt = 80, v = 0.5/1.5/1.8.
struct ScenarioConfig {
  FigureId id = FigureId::Fig2;
  /// Recognized keys: sites, nu, ratio, velocity, omega_a2, dt, tmax, stride,
  /// center0. Flags win over built-in defaults.
  std::map<std::string, double> overrides;
  std::filesystem::path output_dir = ".";
  bool write_csv = true;
  bool write_json = true;
  /// "pt" or "harmonic"; used by Custom only.
  std::string custom_potential = "pt";
};

struct ScenarioResult {
  std::string summary_json;
  std::vector<std::string> files;
  /// D16-style physics validity: false when radiation reached the outer
  /// boundary zone of an open lattice during the run.
  bool valid = true;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// The even/odd bound modes of the nu = 1.27 well at rest plus their boosted
/// variants for drift velocity v (phase chosen so the packets co-move with a
/// well drifting toward decreasing n).
struct Fig4Inputs {
  WaveState phi0;          // even-parity ground mode
  WaveState phi1;          // odd-parity excited mode
  WaveState boosted_phi0;
  WaveState boosted_phi1;
  BoostParameters boost;   // parameters of the applied phase
};
Fig4Inputs prepare_fig4_inputs(const LatticeModel& model, double v = 1.5);

struct SweepRow {
  double nu;
  double v;
  int predicted = 0;       // 1 + floor(nu*)
  int measured = -1;       // localized modes seen by the dynamics probe
  bool ok = true;
  std::string note;
};

struct SweepOptions {
  int sites = 401;
  double ratio = 0.2;  // a/l
  double t_max = 60.0;
  double dt = 0.01;
};

/// Bound-state counts over a (nu, v) grid: the continuum prediction next to a
/// dynamics probe that launches the boosted modes of the effectively deepened
/// well and counts which stay localized. Per-cell failures are recorded, not
/// fatal.
std::vector<SweepRow> sweep(const std::vector<double>& nus,
                            const std::vector<double>& vs,
                            const SweepOptions& opt = {});

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace dwm
