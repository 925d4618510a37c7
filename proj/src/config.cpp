// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cavity
{

namespace
{

using json = nlohmann::json;

[[noreturn]] void fail(const std::string &path, const std::string &what)
{
  throw ConfigError(path + ": " + what);
}

// A JSON object together with its path, for error messages.
class Node
{
public:
  Node(const json &j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) {
      fail(path_, "expected an object");
    }
  }

  const std::string &path() const { return path_; }
  std::string at(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string &key) const { return j_.contains(key) && !j_[key].is_null(); }
  const json &raw(const std::string &key) const { return j_[key]; }

  // Rejects keys outside the allowed set, so that typos do not go unnoticed.
  void only(std::initializer_list<const char *> keys) const
  {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!allowed.count(it.key())) {
        fail(at(it.key()), "unknown key");
      }
    }
  }

  Node object(const std::string &key) const
  {
    if (!has(key)) {
      fail(at(key), "missing");
    }
    return Node(j_[key], at(key));
  }

  double number(const std::string &key) const
  {
    if (!has(key)) {
      fail(at(key), "missing");
    }
    return as_number(j_[key], at(key));
  }

  double number_or(const std::string &key, double fallback) const
  {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string &key) const
  {
    if (!has(key)) {
      fail(at(key), "missing");
    }
    const json &v = j_[key];
    if (!v.is_number_integer()) {
      fail(at(key), "expected an integer");
    }
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      fail(at(key), "integer out of range");
    }
    return static_cast<int>(x);
  }

  std::string string(const std::string &key) const
  {
    if (!has(key)) {
      fail(at(key), "missing");
    }
    if (!j_[key].is_string()) {
      fail(at(key), "expected a string");
    }
    return j_[key].get<std::string>();
  }

  static double as_number(const json &v, const std::string &path)
  {
    if (!v.is_number()) {
      fail(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      fail(path, "must be finite");
    }
    return x;
  }

  // A real number or a two-element array [re, im].
  static cplx as_complex(const json &v, const std::string &path)
  {
    if (v.is_number()) {
      return {as_number(v, path), 0.0};
    }
    if (v.is_array() && v.size() == 2) {
      return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
    }
    fail(path, "expected a number or [re, im]");
  }

private:
  const json &j_;
  std::string path_;
};

std::vector<double> parse_sweep(const Node &s, double scale)
{
  s.only({"start", "stop", "count", "values", "unit"});
  if (s.has("unit")) {
    const std::string unit = s.string("unit");
    if (unit == "deg") {
      scale *= kPi / 180.0;
    } else if (unit != "rad") {
      fail(s.at("unit"), "expected \"rad\" or \"deg\"");
    }
  }
  std::vector<double> values;
  if (s.has("values")) {
    if (s.has("start") || s.has("stop") || s.has("count")) {
      fail(s.path(), "give either values or start/stop/count");
    }
    const json &v = s.raw("values");
    if (!v.is_array()) {
      fail(s.at("values"), "expected an array");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      values.push_back(scale * Node::as_number(v[i], s.at("values") + "[" + std::to_string(i) + "]"));
    }
  } else {
    const int count = s.integer("count");
    if (count < 0) {
      fail(s.at("count"), "must be non-negative");
    }
    const double a = s.number("start");
    const double b = s.number("stop");
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      values.push_back(scale * (a + t * (b - a)));
    }
  }
  if (values.empty()) {
    fail(s.path(), "sweep is empty");
  }
  return values;
}

}  // namespace

double RunConfig::kappa0_at(double param) const
{
  if (kappa0) {
    return *kappa0;
  }
  const double f = sweep.axis == SweepSpec::Axis::Frequency ? param : *frequency_ghz;
  return 2.0 * kPi * f * 1e9 / kSpeedOfLight;
}

double RunConfig::theta_at(double param) const
{
  return sweep.axis == SweepSpec::Axis::Theta ? param : *theta;
}

int RunConfig::region_of(const std::string &material) const
{
  int id = 1;
  for (const auto &[name, m] : materials) {
    if (name == material) {
      return id;
    }
    ++id;
  }
  throw ConfigError("materials." + material + ": not defined");
}

CavityGeometry RunConfig::geometry() const
{
  CavityGeometry g = CavityGeometry::rectangular(width, depth, R, R_hat);
  g.cavity_region = fill.empty() ? kFreeSpaceRegion : region_of(fill);
  const double h = 0.5 * width;
  for (const CoatingSpec &c : coatings) {
    MaterialRegion r;
    r.region = region_of(c.material);
    if (c.wall == CoatingSpec::Wall::Left) {
      r.polygon = {{-h, 0.0}, {-h, -depth}, {-h + c.thickness, -depth}, {-h + c.thickness, 0.0}};
    } else {
      r.polygon = {{h - c.thickness, 0.0}, {h - c.thickness, -depth}, {h, -depth}, {h, 0.0}};
    }
    g.coatings.push_back(std::move(r));
  }
  g.humps = humps;
  return g;
}

Problem RunConfig::problem_at(double param) const
{
  const double k0 = kappa0_at(param);
  Problem p;
  p.pol = pol;
  p.geom = geometry();
  p.materials = MaterialMap(k0);
  for (const auto &[name, m] : materials) {
    p.materials.set(region_of(name), m);
  }
  p.wave = IncidentWave(k0, theta_at(param));
  p.h0 = h0 ? *h0 : 2.0 * kPi / k0 / *points_per_wavelength;
  p.N = N;
  p.tbc_tol = tbc_tol;
  return p;
}

RunConfig parse_config(const std::string &text)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("<root>: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    fail("<root>", "expected an object");
  }
  const Node top(root, "");
  top.only({"polarization", "geometry", "materials", "wave", "mesh", "dtn", "adapt", "outputs"});

  RunConfig cfg;
  const std::string pol = top.string("polarization");
  if (pol == "TM") {
    cfg.pol = Polarization::TM;
  } else if (pol == "TE") {
    cfg.pol = Polarization::TE;
  } else {
    fail("polarization", "expected \"TM\" or \"TE\"");
  }

  // Materials first; the geometry refers to them by name.
  if (top.has("materials")) {
    const Node mats = top.object("materials");
    for (auto it = root["materials"].begin(); it != root["materials"].end(); ++it) {
      const Node m(it.value(), mats.at(it.key()));
      m.only({"eps_r", "mu_r"});
      Material mat;
      if (m.has("eps_r")) {
        mat.eps_r = Node::as_complex(m.raw("eps_r"), m.at("eps_r"));
      }
      if (m.has("mu_r")) {
        mat.mu_r = Node::as_complex(m.raw("mu_r"), m.at("mu_r"));
      }
      try {
        MaterialMap(1.0).set(1, mat);
      } catch (const ConfigError &e) {
        fail(m.path(), e.what());
      }
      cfg.materials[it.key()] = mat;
    }
  }
  auto require_material = [&](const std::string &name, const std::string &path) {
    if (!cfg.materials.count(name)) {
      fail(path, "material \"" + name + "\" is not defined");
    }
    if (cfg.pol == Polarization::TE && cfg.materials.at(name).mu_r != cplx{1.0, 0.0}) {
      fail(path, "TE requires mu_r = 1 in every material");
    }
  };

  const Node geo = top.object("geometry");
  geo.only({"unit", "width", "depth", "R", "R_hat", "fill", "coatings", "humps"});
  const double unit = geo.number_or("unit", 1.0);
  if (!(unit > 0.0)) {
    fail(geo.at("unit"), "must be positive");
  }
  cfg.width = unit * geo.number("width");
  cfg.depth = unit * geo.number("depth");
  cfg.R = unit * geo.number("R");
  cfg.R_hat = unit * geo.number_or("R_hat", 0.0);
  if (!(cfg.width > 0.0)) {
    fail(geo.at("width"), "must be positive");
  }
  if (!(cfg.depth > 0.0)) {
    fail(geo.at("depth"), "must be positive");
  }
  if (geo.has("fill")) {
    cfg.fill = geo.string("fill");
    require_material(cfg.fill, geo.at("fill"));
  }
  if (geo.has("coatings")) {
    const json &arr = geo.raw("coatings");
    if (!arr.is_array()) {
      fail(geo.at("coatings"), "expected an array");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Node c(arr[i], geo.at("coatings") + "[" + std::to_string(i) + "]");
      c.only({"wall", "thickness", "material"});
      const std::string wall = c.string("wall");
      std::vector<CoatingSpec::Wall> walls;
      if (wall == "left" || wall == "both") {
        walls.push_back(CoatingSpec::Wall::Left);
      }
      if (wall == "right" || wall == "both") {
        walls.push_back(CoatingSpec::Wall::Right);
      }
      if (walls.empty()) {
        fail(c.at("wall"), "expected \"left\", \"right\" or \"both\"");
      }
      const double t = unit * c.number("thickness");
      if (!(t > 0.0 && t < 0.5 * cfg.width)) {
        fail(c.at("thickness"), "must lie in (0, width / 2)");
      }
      const std::string mat = c.string("material");
      require_material(mat, c.at("material"));
      for (auto w : walls) {
        cfg.coatings.push_back({w, t, mat});
      }
    }
  }
  if (geo.has("humps")) {
    const json &arr = geo.raw("humps");
    if (!arr.is_array()) {
      fail(geo.at("humps"), "expected an array");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Node h(arr[i], geo.at("humps") + "[" + std::to_string(i) + "]");
      h.only({"x0", "x1", "y0", "y1"});
      cfg.humps.push_back({unit * h.number("x0"), unit * h.number("x1"), unit * h.number("y0"),
                           unit * h.number("y1")});
    }
  }
  try {
    cfg.geometry().validate();
  } catch (const GeometryError &e) {
    fail("geometry", e.what());
  }

  const Node wave = top.object("wave");
  wave.only({"kappa0", "kappa0_over_pi", "frequency_ghz", "frequency_ghz_sweep", "theta",
             "theta_deg", "theta_sweep"});
  const int n_freq = wave.has("kappa0") + wave.has("kappa0_over_pi") + wave.has("frequency_ghz") +
                     wave.has("frequency_ghz_sweep");
  if (n_freq != 1) {
    fail("wave", "give exactly one of kappa0, kappa0_over_pi, frequency_ghz, frequency_ghz_sweep");
  }
  const int n_theta = wave.has("theta") + wave.has("theta_deg") + wave.has("theta_sweep");
  if (n_theta != 1) {
    fail("wave", "give exactly one of theta, theta_deg, theta_sweep");
  }
  if (wave.has("frequency_ghz_sweep") && wave.has("theta_sweep")) {
    fail("wave", "only one sweep axis is allowed");
  }
  if (wave.has("kappa0")) {
    cfg.kappa0 = wave.number("kappa0");
  } else if (wave.has("kappa0_over_pi")) {
    cfg.kappa0 = kPi * wave.number("kappa0_over_pi");
  } else if (wave.has("frequency_ghz")) {
    cfg.frequency_ghz = wave.number("frequency_ghz");
    if (!(*cfg.frequency_ghz > 0.0)) {
      fail(wave.at("frequency_ghz"), "must be positive");
    }
  }
  if (cfg.kappa0 && !(*cfg.kappa0 > 0.0)) {
    fail("wave", "kappa0 must be positive");
  }
  if (wave.has("theta")) {
    cfg.theta = wave.number("theta");
  } else if (wave.has("theta_deg")) {
    cfg.theta = wave.number("theta_deg") * kPi / 180.0;
  }
  if (wave.has("frequency_ghz_sweep")) {
    cfg.sweep.axis = SweepSpec::Axis::Frequency;
    cfg.sweep.values = parse_sweep(wave.object("frequency_ghz_sweep"), 1.0);
    for (double f : cfg.sweep.values) {
      if (!(f > 0.0)) {
        fail(wave.at("frequency_ghz_sweep"), "frequencies must be positive");
      }
    }
  } else if (wave.has("theta_sweep")) {
    cfg.sweep.axis = SweepSpec::Axis::Theta;
    cfg.sweep.values = parse_sweep(wave.object("theta_sweep"), 1.0);
  } else {
    cfg.sweep.axis = SweepSpec::Axis::Theta;
    cfg.sweep.values = {*cfg.theta};
    cfg.theta.reset();
  }
  if (cfg.sweep.axis == SweepSpec::Axis::Theta) {
    for (double t : cfg.sweep.values) {
      if (!(std::abs(t) <= 0.5 * kPi + 1e-12)) {
        fail("wave", "incidence angles must satisfy |theta| <= pi/2");
      }
    }
    for (double &t : cfg.sweep.values) {
      t = std::clamp(t, -0.5 * kPi, 0.5 * kPi);
    }
  } else if (!(std::abs(*cfg.theta) <= 0.5 * kPi)) {
    fail("wave", "incidence angles must satisfy |theta| <= pi/2");
  }

  if (top.has("mesh")) {
    const Node mesh = top.object("mesh");
    mesh.only({"h0", "points_per_wavelength"});
    if (mesh.has("h0") && mesh.has("points_per_wavelength")) {
      fail("mesh", "give either h0 or points_per_wavelength");
    }
    if (mesh.has("h0")) {
      cfg.h0 = unit * mesh.number("h0");
      if (!(*cfg.h0 > 0.0)) {
        fail(mesh.at("h0"), "must be positive");
      }
    }
    if (mesh.has("points_per_wavelength")) {
      cfg.points_per_wavelength = mesh.number("points_per_wavelength");
      if (!(*cfg.points_per_wavelength > 0.0)) {
        fail(mesh.at("points_per_wavelength"), "must be positive");
      }
    }
  }
  if (!cfg.h0 && !cfg.points_per_wavelength) {
    cfg.points_per_wavelength = 20.0;
  }

  if (top.has("dtn")) {
    const Node dtn = top.object("dtn");
    dtn.only({"N", "epsN_target", "tbc_tol"});
    if (dtn.has("N")) {
      const json &n = dtn.raw("N");
      if (n.is_string()) {
        if (n.get<std::string>() != "auto") {
          fail(dtn.at("N"), "expected an integer or \"auto\"");
        }
      } else {
        cfg.N = dtn.integer("N");
        if (cfg.N < 1) {
          fail(dtn.at("N"), "must be at least 1");
        }
      }
    }
    cfg.epsN_target = dtn.number_or("epsN_target", cfg.epsN_target);
    cfg.tbc_tol = dtn.number_or("tbc_tol", cfg.tbc_tol);
    if (!(cfg.tbc_tol > 0.0 && cfg.tbc_tol < 1.0)) {
      fail(dtn.at("tbc_tol"), "must lie in (0, 1)");
    }
  }
  cfg.adapt.epsN_target = cfg.epsN_target;

  if (top.has("adapt")) {
    const Node ad = top.object("adapt");
    ad.only({"tau", "tol", "max_dof", "max_iter", "mode"});
    cfg.adapt.tau = ad.number_or("tau", cfg.adapt.tau);
    cfg.adapt.tol = ad.number_or("tol", cfg.adapt.tol);
    if (ad.has("max_dof")) {
      cfg.adapt.max_dof = ad.integer("max_dof");
    }
    if (ad.has("max_iter")) {
      cfg.adapt.max_iter = ad.integer("max_iter");
    }
    if (ad.has("mode")) {
      const std::string mode = ad.string("mode");
      if (mode == "adaptive") {
        cfg.adapt.mode = RefinementMode::Adaptive;
      } else if (mode == "uniform") {
        cfg.adapt.mode = RefinementMode::Uniform;
      } else {
        fail(ad.at("mode"), "expected \"adaptive\" or \"uniform\"");
      }
    }
  }
  try {
    cfg.adapt.validate();
  } catch (const ConfigError &e) {
    fail("adapt", e.what());
  }

  if (top.has("outputs")) {
    const Node out = top.object("outputs");
    out.only({"rcs_csv", "convergence_csv", "mesh_dir"});
    if (out.has("rcs_csv")) {
      cfg.rcs_csv = out.string("rcs_csv");
    }
    if (out.has("convergence_csv")) {
      cfg.convergence_csv = out.string("convergence_csv");
    }
    if (out.has("mesh_dir")) {
      cfg.mesh_dir = out.string("mesh_dir");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path + ": cannot open file");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace cavity
