// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/physics.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "cavity/specfun.hpp"
#include "quadrature.hpp"

namespace cavity
{

//
// MaterialMap
//

MaterialMap::MaterialMap(double kappa0) : kappa0_(kappa0)
{
  if (!(kappa0 > 0.0) || !std::isfinite(kappa0)) {
    throw ConfigError("material map: kappa0 must be positive and finite");
  }
  regions_[kFreeSpaceRegion] = Material{};
}

void MaterialMap::set(int region, Material m)
{
  if (m.eps_r.imag() < 0.0 || m.mu_r.imag() < 0.0) {
    std::ostringstream msg;
    msg << "material map: region " << region << " is not passive (Im eps_r = " << m.eps_r.imag()
        << ", Im mu_r = " << m.mu_r.imag() << ")";
    throw ConfigError(msg.str());
  }
  if (m.eps_r == 0.0 || m.mu_r == 0.0) {
    throw ConfigError("material map: region " + std::to_string(region) +
                      " has a vanishing material parameter");
  }
  regions_[region] = m;
}

const Material &MaterialMap::material(int region) const
{
  const auto it = regions_.find(region);
  if (it == regions_.end()) {
    throw PreconditionError("material map: unknown region id " + std::to_string(region));
  }
  return it->second;
}

cplx MaterialMap::kappa_squared(int region) const
{
  const Material &m = material(region);
  return kappa0_ * kappa0_ * m.eps_r * m.mu_r;
}

void MaterialMap::check(const Mesh &mesh, Polarization pol) const
{
  std::set<int> used;
  for (const Triangle &t : mesh.triangles()) {
    used.insert(t.region);
  }
  for (int r : used) {
    const Material &m = material(r);
    if (pol == Polarization::TE && m.mu_r != cplx{1.0, 0.0}) {
      throw PreconditionError("material map: TE polarization requires mu_r = 1, region " +
                              std::to_string(r) + " is magnetic");
    }
  }
}

//
// Incident and reference fields
//

IncidentWave::IncidentWave(double k0, double th) : kappa0(k0), theta(th)
{
  if (!(k0 > 0.0) || !std::isfinite(k0)) {
    throw DomainError("incident wave: kappa0 must be positive and finite");
  }
  if (!(std::abs(th) <= 0.5 * kPi)) {
    throw DomainError("incident wave: theta must lie in [-pi/2, pi/2]");
  }
}

namespace
{

// exp(i(alpha x1 - beta x2)) and exp(i(alpha x1 + beta x2)).
std::pair<cplx, cplx> plane_waves(Vec2 p, const IncidentWave &w)
{
  const double a = w.alpha();
  const double b = w.beta();
  return {std::exp(kI * (a * p.x - b * p.y)), std::exp(kI * (a * p.x + b * p.y))};
}

}  // namespace

FieldValue reference_field_tm(Vec2 p, const IncidentWave &wave)
{
  const auto [ui, ur] = plane_waves(p, wave);
  const double a = wave.alpha();
  const double b = wave.beta();
  return {ui - ur, {kI * a * (ui - ur), -kI * b * (ui + ur)}};
}

FieldValue reference_field_te(Vec2 p, const IncidentWave &wave)
{
  const auto [ui, ur] = plane_waves(p, wave);
  const double a = wave.alpha();
  const double b = wave.beta();
  return {ui + ur, {kI * a * (ui + ur), -kI * b * (ui - ur)}};
}

FieldValue reference_field(Polarization pol, Vec2 p, const IncidentWave &wave)
{
  return pol == Polarization::TM ? reference_field_tm(p, wave) : reference_field_te(p, wave);
}

namespace
{

// i^n
cplx ipow(int n)
{
  switch (((n % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

}  // namespace

cplx reference_field_series(Polarization pol, double r, double phi, const IncidentWave &wave,
                            int n_max)
{
  const auto J = specfun::bessel_j_sequence(n_max, wave.kappa0 * r);
  const double shift = wave.theta - 0.5 * kPi;
  cplx sum = 0.0;
  if (pol == Polarization::TM) {
    for (int n = 1; n <= n_max; ++n) {
      sum += 4.0 * ipow(n) * J[n] * std::sin(n * shift) * std::sin(n * phi);
    }
  } else {
    sum = 2.0 * J[0];
    for (int n = 1; n <= n_max; ++n) {
      sum += 4.0 * ipow(n) * J[n] * std::cos(n * shift) * std::cos(n * phi);
    }
  }
  return sum;
}

//
// TBC data
//

TbcData::TbcData(Polarization pol, const IncidentWave &wave, double R, double tol, int min_terms)
  : pol_(pol)
{
  if (!(tol > 0.0)) {
    throw PreconditionError("tbc data: tolerance must be positive");
  }
  const int cap = specfun::kMaxOrder;
  const auto inv_h = specfun::inverse_hankel(cap, wave.kappa0 * R);
  const double shift = wave.theta - 0.5 * kPi;
  const double scale = -8.0 / (kPi * R);

  coef_.assign(1, cplx{0.0, 0.0});
  if (pol == Polarization::TE) {
    coef_[0] = -4.0 * kI / (kPi * R) * inv_h[0];
  }
  double biggest = std::abs(coef_[0]);
  int small = 0;
  for (int n = 1; n <= cap; ++n) {
    const double angular = pol == Polarization::TM ? std::sin(n * shift) : std::cos(n * shift);
    const cplx c = scale * ipow(n + 1) * inv_h[n] * angular;
    coef_.push_back(c);
    const double mag = std::abs(c);
    biggest = std::max(biggest, mag);
    small = mag <= tol * biggest ? small + 1 : 0;
    if (small >= 5 && n >= min_terms) {
      return;
    }
  }
  std::ostringstream msg;
  msg << "tbc data: series did not converge within " << cap << " terms (kappa0 R = "
      << wave.kappa0 * R << ")";
  throw NumericalError(msg.str());
}

cplx TbcData::operator()(double phi) const
{
  cplx sum = coef_[0];
  for (int n = 1; n < static_cast<int>(coef_.size()); ++n) {
    sum += coef_[n] * (pol_ == Polarization::TM ? std::sin(n * phi) : std::cos(n * phi));
  }
  return sum;
}

cplx tbc_data_tm(double phi, const IncidentWave &wave, double R, double tol)
{
  return TbcData(Polarization::TM, wave, R, tol)(phi);
}

cplx tbc_data_te(double phi, const IncidentWave &wave, double R, double tol)
{
  return TbcData(Polarization::TE, wave, R, tol)(phi);
}

double ref_field_h1_norm(const Mesh &mesh, const IncidentWave &wave, Polarization pol)
{
  using Q = detail::Triangle6;
  const auto &X = mesh.nodes();
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto &v = mesh.triangles()[t].v;
    double local = 0.0;
    for (std::size_t q = 0; q < Q::w.size(); ++q) {
      const auto &l = Q::lambda[q];
      const Vec2 p = l[0] * X[v[0]] + l[1] * X[v[1]] + l[2] * X[v[2]];
      const FieldValue f = reference_field(pol, p, wave);
      local += Q::w[q] * (std::norm(f.value) + std::norm(f.grad[0]) + std::norm(f.grad[1]));
    }
    total += mesh.area(t) * local;
  }
  return std::sqrt(total);
}

}  // namespace cavity
