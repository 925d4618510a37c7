// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_PHYSICS_HPP
#define CAVITY_PHYSICS_HPP

#include <array>
#include <map>
#include <vector>

#include "cavity/common.hpp"
#include "cavity/geometry.hpp"

namespace cavity
{

// Relative material parameters; conductivity enters through Im(eps_r).
struct Material
{
  cplx eps_r{1.0, 0.0};
  cplx mu_r{1.0, 0.0};
};

//
// Region-wise materials. Region 0 (free space) defaults to eps_r = mu_r = 1 and may be
// overridden; every other region has to be registered explicitly.
//
class MaterialMap
{
public:
  explicit MaterialMap(double kappa0);

  // Throws ConfigError for active (non-passive) media.
  void set(int region, Material m);

  double kappa0() const { return kappa0_; }
  const Material &material(int region) const;
  // kappa0^2 eps_r mu_r.
  cplx kappa_squared(int region) const;
  const std::map<int, Material> &regions() const { return regions_; }

  // Throws PreconditionError when a triangle's region is unknown, or for TE when mu_r
  // differs from 1 anywhere (the TE form assumes a non-magnetic medium).
  void check(const Mesh &mesh, Polarization pol) const;

private:
  double kappa0_;
  std::map<int, Material> regions_;
};

// Plane wave exp(i(alpha x1 - beta x2)) with alpha = kappa0 sin(theta),
// beta = kappa0 cos(theta). theta is measured from the downward normal.
struct IncidentWave
{
  double kappa0 = 1.0;
  double theta = 0.0;

  IncidentWave() = default;
  // Throws DomainError unless kappa0 > 0 and |theta| <= pi/2.
  IncidentWave(double kappa0, double theta);

  double alpha() const { return kappa0 * std::sin(theta); }
  double beta() const { return kappa0 * std::cos(theta); }
};

struct FieldValue
{
  cplx value;
  std::array<cplx, 2> grad;
};

// Incident plus reflected wave for a PEC ground plane, with the analytic extension below it.
FieldValue reference_field_tm(Vec2 p, const IncidentWave &wave);
FieldValue reference_field_te(Vec2 p, const IncidentWave &wave);
FieldValue reference_field(Polarization pol, Vec2 p, const IncidentWave &wave);

// Cylindrical-wave expansion of the reference field at polar point (r, phi), orders up to
// n_max. Used to cross-check the closed forms above.
cplx reference_field_series(Polarization pol, double r, double phi, const IncidentWave &wave,
                            int n_max);

//
// Right-hand side of the transparent boundary condition on |x| = R, stored as Fourier
// coefficients: TM data is sum_n c_n sin(n phi), TE data sum_n c_n cos(n phi).
//
class TbcData
{
public:
  TbcData() = default;
  TbcData(Polarization pol, const IncidentWave &wave, double R, double tol, int min_terms = 0);

  cplx operator()(double phi) const;
  // Highest order kept.
  int order() const { return static_cast<int>(coef_.size()) - 1; }
  const std::vector<cplx> &coefficients() const { return coef_; }

private:
  Polarization pol_ = Polarization::TM;
  std::vector<cplx> coef_;
};

cplx tbc_data_tm(double phi, const IncidentWave &wave, double R, double tol);
cplx tbc_data_te(double phi, const IncidentWave &wave, double R, double tol);

// H^1(Omega) norm of the reference field, degree-4 quadrature on every triangle.
double ref_field_h1_norm(const Mesh &mesh, const IncidentWave &wave, Polarization pol);

}  // namespace cavity

#endif  // CAVITY_PHYSICS_HPP
