#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "dwm/boost.hpp"
#include "dwm/scenarios.hpp"
#include "json.hpp"

using namespace dwm;
using nlohmann::json;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dwm_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("figure id parsing") {
  CHECK(parse_figure_id("fig4d") == FigureId::Fig4d);
  CHECK(figure_id_name(FigureId::Fig5c) == "fig5c");
  for (const char* name : {"fig2", "fig3", "fig4a", "fig4b", "fig4c", "fig4d",
                           "fig5a", "fig5b", "fig5c", "custom"})
    CHECK(figure_id_name(parse_figure_id(name)) == name);
  CHECK_THROWS_AS(parse_figure_id("fig9"), std::invalid_argument);
}

TEST_CASE("fig4 inputs: parities, orthogonality, boost is a pure phase") {
  LatticeModel model{200, {}};
  const auto inputs = prepare_fig4_inputs(model, 1.5);

  CHECK(parity_score(inputs.phi0, 0.0) > 0.99);
  CHECK(parity_score(inputs.phi1, 0.0) < -0.99);
  CHECK(std::abs(inner_product(inputs.phi0, inputs.phi1)) < 1e-10);

  CHECK(inputs.boost.sin_qa() == doctest::Approx(-0.75));
  for (int i = 0; i < inputs.phi0.size(); ++i) {
    CHECK(std::abs(inputs.boosted_phi0.amplitudes[i]) ==
          doctest::Approx(std::abs(inputs.phi0.amplitudes[i])).epsilon(1e-14));
    CHECK(std::abs(inputs.boosted_phi1.amplitudes[i]) ==
          doctest::Approx(std::abs(inputs.phi1.amplitudes[i])).epsilon(1e-14));
  }
}

TEST_CASE("fig4 inputs need a lattice that binds both modes") {
  LatticeModel tiny{5, {}};
  CHECK_THROWS(static_cast<void>(prepare_fig4_inputs(tiny, 1.5)));
}

TEST_CASE("fig2 scenario summary") {
  ScenarioConfig cfg;
  cfg.id = FigureId::Fig2;
  cfg.output_dir = temp_dir("fig2");
  const auto result = run_scenario(cfg);
  CHECK(result.valid);

  const auto s = json::parse(result.summary_json);
  CHECK(s["bound_count"] == 1);
  CHECK(s["sturm_count_below_threshold"] == 1);
  CHECK(s["min_eigenvalue"].get<double>() < -2.0);
  CHECK(s["r_min"].get<double>() < 40.0);
  CHECK(s["bound_states"][0]["parity"].get<double>() > 0.99);
  CHECK(s["analytic"]["max_rel_binding_error"].get<double>() < 0.05);
  for (const char* f : {"spectrum.csv", "potential.csv", "state_0.csv", "plot.gp",
                        "summary.json"})
    CHECK(std::filesystem::exists(cfg.output_dir / f));
}

TEST_CASE("fig3 scenario finds two bound states of opposite parity") {
  ScenarioConfig cfg;
  cfg.id = FigureId::Fig3;
  cfg.output_dir = temp_dir("fig3");
  cfg.write_csv = false;  // summary only
  const auto s = json::parse(run_scenario(cfg).summary_json);
  CHECK(s["bound_count"] == 2);
  const double p0 = s["bound_states"][0]["parity"].get<double>();
  const double p1 = s["bound_states"][1]["parity"].get<double>();
  CHECK(p0 > 0.99);
  CHECK(p1 < -0.99);
}

TEST_CASE("scenario overrides and validation") {
  ScenarioConfig cfg;
  cfg.id = FigureId::Fig2;
  cfg.output_dir = temp_dir("fig2-small");
  cfg.write_csv = false;
  cfg.overrides["sites"] = 201;
  const auto s = json::parse(run_scenario(cfg).summary_json);
  CHECK(s["parameters"]["sites"] == 201);
  CHECK(s["bound_count"] == 1);

  cfg.overrides["sites"] = 200;  // even
  CHECK_THROWS_AS(static_cast<void>(run_scenario(cfg)), std::invalid_argument);
  cfg.overrides.clear();
  cfg.overrides["bogus"] = 1.0;
  CHECK_THROWS_AS(static_cast<void>(run_scenario(cfg)), std::invalid_argument);
}

TEST_CASE("custom scenario: short drifting-well run") {
  ScenarioConfig cfg;
  cfg.id = FigureId::Custom;
  cfg.output_dir = temp_dir("custom");
  cfg.overrides["sites"] = 201;
  cfg.overrides["nu"] = 1.27;
  cfg.overrides["velocity"] = 1.0;
  cfg.overrides["center0"] = 20.0;
  cfg.overrides["tmax"] = 20.0;
  const auto s = json::parse(run_scenario(cfg).summary_json);
  CHECK(s["evolution"]["final_localized_fraction"].get<double>() > 0.9);
  // the well ends up where the drift convention says it must
  CHECK(s["evolution"]["well_center_final"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("spectrum scenarios are byte-deterministic") {
  ScenarioConfig a;
  a.id = FigureId::Fig2;
  a.output_dir = temp_dir("det-a");
  ScenarioConfig b = a;
  b.output_dir = temp_dir("det-b");
  const auto ra = run_scenario(a);
  const auto rb = run_scenario(b);
  REQUIRE(ra.files == rb.files);
  for (const auto& f : ra.files)
    CHECK(slurp(a.output_dir / f) == slurp(b.output_dir / f));
}

TEST_CASE("sweep reproduces the known benchmark cells") {
  SweepOptions opt;
  opt.t_max = 40.0;
  const auto rows = sweep({0.97}, {0.0, 1.5}, opt);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok);
  CHECK(rows[0].predicted == 1);
  CHECK(rows[0].measured == 1);
  CHECK(rows[1].ok);
  CHECK(rows[1].predicted == 2);
  CHECK(rows[1].measured == 2);

  const auto csv = sweep_csv(rows);
  CHECK(csv.find("0.96999999999999997,0,1,1,1,") != std::string::npos);
}

TEST_CASE("sweep records per-cell failures without aborting") {
  const auto rows = sweep({0.97}, {2.5});
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].ok);
  CHECK(!rows[0].note.empty());
}

TEST_CASE("the bound-state count jumps where nu*(v) crosses one") {
  // bisection oracle on nu*(v) - 1 over v in (0, 2)
  auto nu_star = [](double v) {
    return effective_depth(0.97, solve_boost(v).mass_ratio);
  };
  double lo = 0.01, hi = 1.99;
  REQUIRE(nu_star(lo) < 1.0);
  REQUIRE(nu_star(hi) > 1.0);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (nu_star(mid) < 1.0 ? lo : hi) = mid;
  }
  const double v_t = 0.5 * (lo + hi);
  CHECK(v_t == doctest::Approx(0.590306).epsilon(1e-5));
  // the crossing satisfies mass_ratio = 2 / (0.97 * 1.97) exactly
  CHECK(solve_boost(v_t).mass_ratio ==
        doctest::Approx(2.0 / (0.97 * 1.97)).epsilon(1e-10));
  CHECK(predicted_bound_count(0.97, v_t - 1e-6) == 1);
  CHECK(predicted_bound_count(0.97, v_t + 1e-6) == 2);
}

TEST_CASE("predicted count is non-decreasing in the drift velocity") {
  for (double nu : {0.5, 0.97, 1.8}) {
    int prev = 0;
    for (double v = 0.0; v < 2.0; v += 0.1) {
      const int c = predicted_bound_count(nu, v);
      CHECK(c >= prev);
      prev = c;
    }
  }
}
