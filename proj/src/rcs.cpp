// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/rcs.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "quadrature.hpp"

namespace cavity
{

const char *to_string(RcsFormula f)
{
  return f == RcsFormula::Aperture ? "aperture" : "semicircle";
}

ApertureTrace aperture_trace(const Solution &sol, const IncidentWave &wave)
{
  const Mesh &mesh = sol.mesh;
  const auto &X = mesh.nodes();
  const bool te = sol.dtn.pol == Polarization::TE;

  // Area-weighted nodal average of d u_h / d x2 (TE only).
  std::vector<cplx> dudy;
  if (te) {
    std::vector<cplx> acc(mesh.num_nodes(), cplx{0.0, 0.0});
    std::vector<double> wsum(mesh.num_nodes(), 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto &v = mesh.triangles()[t].v;
      const double area = mesh.area(t);
      cplx gy = 0.0;
      for (int k = 0; k < 3; ++k) {
        const Vec2 a = X[v[(k + 1) % 3]];
        const Vec2 b = X[v[(k + 2) % 3]];
        gy += sol.u[v[k]] * ((b.x - a.x) / (2.0 * area));
      }
      for (int k = 0; k < 3; ++k) {
        acc[v[k]] += area * gy;
        wsum[v[k]] += area;
      }
    }
    dudy.resize(mesh.num_nodes());
    for (int n = 0; n < mesh.num_nodes(); ++n) {
      dudy[n] = wsum[n] > 0.0 ? acc[n] / wsum[n] : cplx{0.0, 0.0};
    }
  }

  ApertureTrace out;
  for (const MeshEdge &e : mesh.edges()) {
    if (e.tag != EdgeTag::Aperture) {
      continue;
    }
    int a = e.v[0];
    int b = e.v[1];
    if (X[a].x > X[b].x) {
      std::swap(a, b);
    }
    out.segments.push_back({X[a].x, X[b].x});
    std::array<cplx, 2> us{}, dy{};
    const int ends[2] = {a, b};
    for (int k = 0; k < 2; ++k) {
      const FieldValue ref = reference_field(sol.dtn.pol, X[ends[k]], wave);
      us[k] = sol.u[ends[k]] - ref.value;
      if (te) {
        dy[k] = dudy[ends[k]] - ref.grad[1];
      }
    }
    out.us.push_back(us);
    out.dus_dy.push_back(dy);
  }
  return out;
}

ArcTrace arc_trace(const Solution &sol, const IncidentWave &wave)
{
  const BoundaryArc arc = boundary_arc(sol.mesh);
  ArcTrace out;
  out.R = arc.R;
  out.phi = arc.phi;
  out.us.resize(arc.size());
  for (int i = 0; i < arc.size(); ++i) {
    const int n = arc.nodes[i];
    out.us[i] = sol.u[n] - reference_field(sol.dtn.pol, sol.mesh.nodes()[n], wave).value;
  }
  out.dr_us = dtn_apply_trace(arc, out.us, sol.dtn);
  return out;
}

double rcs_aperture(const ApertureTrace &trace, double kappa0, Polarization pol, double varphi)
{
  using G = detail::Gauss4;
  const double c = kappa0 * std::cos(varphi);
  const auto &vals = pol == Polarization::TM ? trace.us : trace.dus_dy;
  cplx integral = 0.0;
  for (std::size_t s = 0; s < trace.segments.size(); ++s) {
    const double y0 = trace.segments[s][0];
    const double y1 = trace.segments[s][1];
    for (std::size_t q = 0; q < G::x.size(); ++q) {
      const double t = G::x[q];
      const double y = (1.0 - t) * y0 + t * y1;
      const cplx v = (1.0 - t) * vals[s][0] + t * vals[s][1];
      integral += G::w[q] * (y1 - y0) * v * std::exp(kI * (c * y));
    }
  }
  if (pol == Polarization::TM) {
    return kappa0 * std::norm(std::sin(varphi) * integral);
  }
  return std::norm(integral) / kappa0;
}

double rcs_semicircle(const ArcTrace &trace, double kappa0, Polarization pol, double varphi)
{
  const double k = kappa0;
  const double R = trace.R;
  auto integrand = [&](std::size_t i, double angle) {
    const double c = std::cos(angle);
    return (kI * k * c * trace.us[i] - trace.dr_us[i]) * std::exp(kI * (k * R * c));
  };
  cplx direct = 0.0;
  cplx image = 0.0;
  for (std::size_t i = 0; i + 1 < trace.phi.size(); ++i) {
    const double h = 0.5 * (trace.phi[i + 1] - trace.phi[i]);
    direct += h * (integrand(i, trace.phi[i] - varphi) + integrand(i + 1, trace.phi[i + 1] - varphi));
    image += h * (integrand(i, trace.phi[i] + varphi) + integrand(i + 1, trace.phi[i + 1] + varphi));
  }
  const cplx total = pol == Polarization::TM ? direct - image : direct + image;
  return R * R / (4.0 * k) * std::norm(total);
}

std::vector<RcsSample> backscatter_rcs(const Solution &sol, const Problem &problem, double param)
{
  const double varphi = backscatter_angle(problem.wave.theta);
  const double k0 = problem.wave.kappa0;
  std::vector<RcsSample> out;
  if (problem.geom.R_hat == 0.0) {
    const ApertureTrace at = aperture_trace(sol, problem.wave);
    if (!at.segments.empty()) {
      out.push_back({param, rcs_aperture(at, k0, problem.pol, varphi), RcsFormula::Aperture, true, {}});
    }
  }
  const ArcTrace arc = arc_trace(sol, problem.wave);
  out.push_back({param, rcs_semicircle(arc, k0, problem.pol, varphi), RcsFormula::Semicircle, true, {}});
  return out;
}

void write_rcs_csv(std::ostream &out, const RcsCurve &curve)
{
  out << "param,sigma_linear,sigma_db,formula\n";
  char buf[160];
  for (const RcsSample &s : curve.samples) {
    if (s.ok) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s\n", s.param, s.sigma, to_db(s.sigma),
                    to_string(s.formula));
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,nan,nan,%s\n", s.param, to_string(s.formula));
    }
    out << buf;
  }
}

}  // namespace cavity
