// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_CONFIG_HPP
#define CAVITY_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavity/adapt.hpp"

namespace cavity
{

// Speed of light used to turn frequencies into wavenumbers (m/s).
inline constexpr double kSpeedOfLight = 299792458.0;

// Absorbing layer on a vertical cavity wall, growing inwards.
struct CoatingSpec
{
  enum class Wall
  {
    Left,
    Right
  };
  Wall wall = Wall::Left;
  double thickness = 0.0;
  std::string material;
};

// Sweep over the incidence angle (radians) or the frequency (GHz).
struct SweepSpec
{
  enum class Axis
  {
    Theta,
    Frequency
  };
  Axis axis = Axis::Theta;
  std::vector<double> values;
};

//
// Parsed and validated run description. All lengths are stored in final units, i.e.
// already multiplied by the geometry unit.
//
struct RunConfig
{
  Polarization pol = Polarization::TM;

  // Rectangular cavity.
  double width = 0.0;
  double depth = 0.0;
  double R = 0.0;
  double R_hat = 0.0;
  std::vector<CoatingSpec> coatings;
  std::vector<Rect> humps;
  std::string fill;  // material filling the cavity, empty for free space

  std::map<std::string, Material> materials;

  // Exactly one of these is set; a frequency sweep leaves both empty.
  std::optional<double> kappa0;
  std::optional<double> frequency_ghz;
  std::optional<double> theta;  // fixed incidence for a frequency sweep
  SweepSpec sweep;

  // Initial mesh size: absolute, or a fraction of the wavelength of each sweep point.
  std::optional<double> h0;
  std::optional<double> points_per_wavelength;

  int N = 0;  // 0 means automatic
  double epsN_target = 1e-8;
  double tbc_tol = 1e-15;

  AdaptConfig adapt;

  std::string rcs_csv = "rcs.csv";
  std::string convergence_csv = "convergence.csv";
  std::string mesh_dir;  // empty: no mesh dumps

  // Free-space wavenumber of a sweep point.
  double kappa0_at(double param) const;
  // Incidence angle of a sweep point.
  double theta_at(double param) const;
  // Cavity geometry with region ids assigned to the materials (see region_of).
  CavityGeometry geometry() const;
  // Region id of a named material: 1, 2, ... in name order.
  int region_of(const std::string &material) const;
  // Complete problem definition of one sweep point.
  Problem problem_at(double param) const;
};

// Parses JSON text. Throws ConfigError whose message starts with the offending path,
// e.g. "wave.theta_sweep.count: must be positive".
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);

}  // namespace cavity

#endif  // CAVITY_CONFIG_HPP
