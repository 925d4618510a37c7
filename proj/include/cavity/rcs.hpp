// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_RCS_HPP
#define CAVITY_RCS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "cavity/adapt.hpp"

namespace cavity
{

enum class RcsFormula
{
  Aperture,
  Semicircle
};

const char *to_string(RcsFormula f);

// Scattered field on the cavity opening: one entry per aperture edge endpoint pair.
struct ApertureTrace
{
  std::vector<std::array<double, 2>> segments;  // [y1_start, y1_end]
  std::vector<std::array<cplx, 2>> us;          // u^s at both ends
  std::vector<std::array<cplx, 2>> dus_dy;      // d u^s / d x2 at both ends (TE only)
};

// Scattered field and its radial derivative on the arc, ordered by polar angle.
struct ArcTrace
{
  double R = 0.0;
  std::vector<double> phi;
  std::vector<cplx> us;
  std::vector<cplx> dr_us;
};

ApertureTrace aperture_trace(const Solution &sol, const IncidentWave &wave);
ArcTrace arc_trace(const Solution &sol, const IncidentWave &wave);

// Far-field formulas. varphi is the observation angle as it enters the formulas; the
// backscatter direction for incidence theta corresponds to backscatter_angle(theta).
double rcs_aperture(const ApertureTrace &trace, double kappa0, Polarization pol, double varphi);
double rcs_semicircle(const ArcTrace &trace, double kappa0, Polarization pol, double varphi);

// Both formulas evaluate the scattered amplitude in the polar direction pi - varphi, so
// the direction of the incoming wave is reached at varphi = pi/2 - theta.
inline double backscatter_angle(double theta) { return 0.5 * kPi - theta; }

inline double to_db(double sigma) { return 10.0 * std::log10(sigma); }

struct RcsSample
{
  double param = 0.0;  // incidence angle (rad) or frequency (GHz)
  double sigma = 0.0;
  RcsFormula formula = RcsFormula::Semicircle;
  bool ok = true;
  std::string error;  // set when the sweep point failed
};

struct RcsCurve
{
  Polarization pol = Polarization::TM;
  std::vector<RcsSample> samples;
};

// Backscatter RCS of a solution with both formulas (aperture first). The aperture value is
// omitted when the cavity opening is not an interior line of the mesh.
std::vector<RcsSample> backscatter_rcs(const Solution &sol, const Problem &problem, double param);

// RCS CSV: header "param,sigma_linear,sigma_db,formula".
void write_rcs_csv(std::ostream &out, const RcsCurve &curve);

}  // namespace cavity

#endif  // CAVITY_RCS_HPP
