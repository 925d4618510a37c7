// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cavity/config.hpp"
#include "cavity/run.hpp"

using namespace cavity;
namespace fs = std::filesystem;

namespace
{

std::string preset(const std::string &name) { return std::string(CAVITY_PRESET_DIR) + "/" + name; }

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Smallest useful TM configuration; the string is patched by the error tests.
const std::string kSmall = R"({
  "polarization": "TM",
  "geometry": { "unit": 0.0625, "width": 1.0, "depth": 0.25, "R": 0.5 },
  "wave": { "kappa0_over_pi": 32, "theta_sweep": { "values": [-0.3, 0.0, 0.5] } },
  "mesh": { "h0": 0.125 },
  "dtn": { "N": 20 },
  "adapt": { "max_dof": 600 }
})";

std::string replace(std::string s, const std::string &from, const std::string &to)
{
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

void check_error(const std::string &text, const std::string &path_prefix)
{
  try {
    parse_config(text);
    FAIL("no ConfigError for " << path_prefix);
  } catch (const ConfigError &e) {
    const std::string what = e.what();
    CAPTURE(what);
    CHECK(what.rfind(path_prefix, 0) == 0);
  }
}

}  // namespace

TEST_CASE("all presets parse")
{
  for (const char *name : {"example1.json", "example1_empty.json", "example2.json",
                           "example3.json", "example4.json"}) {
    CAPTURE(name);
    const RunConfig c = load_config(preset(name));
    CHECK_FALSE(c.sweep.values.empty());
    CHECK_NOTHROW(c.geometry().validate());
    CHECK_NOTHROW(c.problem_at(c.sweep.values.front()));
  }
}

TEST_CASE("Example 1 preset in final units")
{
  const RunConfig c = load_config(preset("example1.json"));
  const double lambda = 1.0 / 16.0;
  CHECK(c.pol == Polarization::TM);
  CHECK(std::abs(c.width - lambda) <= 1e-16);
  CHECK(std::abs(c.depth - lambda / 4) <= 1e-16);
  CHECK(std::abs(c.R - lambda / 2) <= 1e-16);
  CHECK(c.R_hat == 0.0);
  REQUIRE(c.kappa0);
  CHECK(std::abs(*c.kappa0 - 32.0 * kPi) <= 1e-12);
  CHECK(c.N == 20);
  REQUIRE(c.sweep.values.size() == 91);
  CHECK(std::abs(c.sweep.values.front() + 0.5 * kPi) <= 1e-15);
  CHECK(std::abs(c.sweep.values.back() - 0.5 * kPi) <= 1e-15);
  CHECK(std::abs(c.sweep.values[45]) <= 1e-15);
  REQUIRE(c.h0);
  CHECK(std::abs(*c.h0 - 0.05 * lambda) <= 1e-16);
  CHECK(c.region_of("lossy") == 1);
  const Problem p = c.problem_at(0.3);
  CHECK(p.wave.theta == 0.3);
  CHECK(p.geom.cavity_region == 1);
  CHECK(std::abs(p.materials.kappa_squared(1) - 1024.0 * kPi * kPi * cplx{4.0, 1.0}) <= 1e-9);
}

TEST_CASE("Example 4 preset: frequency sweep in GHz")
{
  const RunConfig c = load_config(preset("example4.json"));
  CHECK(c.pol == Polarization::TE);
  CHECK(c.sweep.axis == SweepSpec::Axis::Frequency);
  REQUIRE(c.sweep.values.size() >= 33);
  CHECK(c.sweep.values.front() == doctest::Approx(2.0));
  CHECK(c.sweep.values.back() == doctest::Approx(18.0));
  const double k = 2.0 * kPi * 6e9 / kSpeedOfLight;
  CHECK(std::abs(c.kappa0_at(6.0) - k) <= 1e-12 * k);
  REQUIRE(c.theta);
  CHECK(std::abs(c.theta_at(6.0) - 80.0 * kPi / 180.0) <= 1e-12);
  REQUIRE(c.points_per_wavelength);
  const Problem p = c.problem_at(6.0);
  CHECK(std::abs(p.h0 - 2.0 * kPi / k / *c.points_per_wavelength) <= 1e-15);
}

TEST_CASE("coatings and humps of Examples 2 and 3")
{
  const RunConfig two = load_config(preset("example2.json"));
  REQUIRE(two.coatings.size() == 2);
  const CavityGeometry g = two.geometry();
  REQUIRE(g.coatings.size() == 2);
  const Material &m = two.materials.at(two.coatings[0].material);
  CHECK(m.eps_r == cplx{12.0, 0.144});
  CHECK(m.mu_r == cplx{1.74, 3.306});
  const RunConfig three = load_config(preset("example3.json"));
  CHECK(three.humps.size() == 2);
  CHECK(three.R_hat > 0.0);
  CHECK(three.R_hat < three.R);
}

TEST_CASE("configuration errors name the offending path")
{
  check_error(replace(kSmall, R"("polarization": "TM",)", ""), "polarization");
  check_error(replace(kSmall, R"("TM")", R"("TX")"), "polarization");
  check_error(replace(kSmall, R"("kappa0_over_pi": 32,)", R"("kappa0_over_pi": 32, "frequency_ghz": 3,)"),
              "wave");
  check_error(replace(kSmall, R"({ "values": [-0.3, 0.0, 0.5] })", R"({ "values": [] })"),
              "wave.theta_sweep");
  check_error(replace(kSmall, R"("N": 20)", R"("N": 20, "bogus": 1)"), "dtn");
  check_error(replace(kSmall, R"("width": 1.0)", R"("width": "wide")"), "geometry.width");
  check_error(replace(kSmall, R"("R": 0.5)", R"("R": 0.3)"), "geometry");
  check_error(replace(kSmall, R"("max_dof": 600)", R"("max_dof": 600, "tau": 1.5)"), "adapt");
  check_error(replace(replace(kSmall, R"("TM")", R"("TE")"), R"("R": 0.5 })",
                      R"("R": 0.5, "fill": "m" }, "materials": { "m": { "eps_r": 2, "mu_r": 2 } })"),
              "geometry.fill");
  check_error(replace(kSmall, R"("R": 0.5 })", R"("R": 0.5, "fill": "nothing" })"), "geometry.fill");
  check_error("{ not json", "");
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("run: outputs are complete and independent of the thread count")
{
  const RunConfig c = parse_config(kSmall);
  const fs::path base = fs::temp_directory_path() / "cavity_dtn_test_run";
  fs::remove_all(base);
  RunOptions one;
  one.out_dir = (base / "one").string();
  RunOptions three = one;
  three.out_dir = (base / "three").string();
  three.threads = 3;
  int messages = 0;
  three.log = [&](LogLevel, const std::string &) { ++messages; };

  const RunReport a = run(c, one);
  const RunReport b = run(c, three);
  CHECK(a.failed == 0);
  CHECK(messages >= 3);
  REQUIRE(a.points.size() == 3);
  for (const auto &p : a.points) {
    CHECK(p.ok);
    CHECK(p.rcs.size() == 2);
    CHECK_FALSE(p.history.empty());
  }
  CHECK(a.curve.samples.size() == 6);

  const std::string rcs = slurp(base / "one" / "rcs.csv");
  CHECK(rcs.rfind("param,sigma_linear,sigma_db,formula\n", 0) == 0);
  CHECK(rcs == slurp(base / "three" / "rcs.csv"));
  for (const char *f : {"convergence_000.csv", "convergence_001.csv", "convergence_002.csv"}) {
    CAPTURE(f);
    const std::string s = slurp(base / "one" / f);
    CHECK(s.rfind("iter,dof,eps_h,eps_N,rcs_linear\n", 0) == 0);
    CHECK(s == slurp(base / "three" / f));
  }

  RunOptions override = one;
  override.out_dir = (base / "uniform").string();
  override.mode = RefinementMode::Uniform;
  override.max_dof = 300;
  const RunReport u = run(c, override);
  CHECK(u.points[0].history.back().dof >= 300);
  fs::remove_all(base);
}

TEST_CASE("run: mesh dumps and failed points")
{
  const fs::path base = fs::temp_directory_path() / "cavity_dtn_test_fail";
  fs::remove_all(base);
  RunConfig c = parse_config(replace(kSmall, R"("max_dof": 600)", R"("max_dof": 300)"));
  c.mesh_dir = "meshes";
  c.sweep.values = {0.1};
  RunOptions o;
  o.out_dir = base.string();
  const RunReport r = run(c, o);
  CHECK(r.failed == 0);
  CHECK(fs::exists(base / "meshes" / "point000_iter000.mesh"));
  CHECK(fs::exists(base / "convergence.csv"));

  // An order below e kappa0 R / 2 is rejected for every point and reported as a failure.
  c.N = 3;
  c.mesh_dir.clear();
  const RunReport bad = run(c, o);
  CHECK(bad.failed == 1);
  CHECK_FALSE(bad.points[0].ok);
  CHECK_FALSE(bad.points[0].numerical_failure);
  CHECK(slurp(base / "rcs.csv").find("nan,nan,semicircle") != std::string::npos);
  fs::remove_all(base);
}
