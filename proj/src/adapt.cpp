// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cavity/linsolve.hpp"
#include "cavity/specfun.hpp"
#include "quadrature.hpp"

namespace cavity
{

void AdaptConfig::validate() const
{
  if (!(tau > 0.0 && tau < 1.0)) {
    throw ConfigError("adapt: tau must lie in (0, 1)");
  }
  if (!(tol >= 0.0)) {
    throw ConfigError("adapt: tol must be non-negative");
  }
  if (max_dof < 1 || max_iter < 1) {
    throw ConfigError("adapt: max_dof and max_iter must be positive");
  }
  if (!(epsN_target > 0.0)) {
    throw ConfigError("adapt: epsN_target must be positive");
  }
}

namespace
{

using Grad = std::array<cplx, 2>;

Grad gradient(const Mesh &mesh, const Vector &u, int t)
{
  const auto &X = mesh.nodes();
  const auto &v = mesh.triangles()[t].v;
  const double twice_area = 2.0 * mesh.area(t);
  Grad g{cplx{0.0}, cplx{0.0}};
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = X[v[(k + 1) % 3]];
    const Vec2 b = X[v[(k + 2) % 3]];
    g[0] += u[v[k]] * ((a.y - b.y) / twice_area);
    g[1] += u[v[k]] * ((b.x - a.x) / twice_area);
  }
  return g;
}

// Outward unit normal of triangle t on the edge opposite local vertex k.
Vec2 outward_normal(const Mesh &mesh, int t, int k)
{
  const auto &X = mesh.nodes();
  const auto &v = mesh.triangles()[t].v;
  const Vec2 d = X[v[(k + 2) % 3]] - X[v[(k + 1) % 3]];
  const double L = norm(d);
  return {d.y / L, -d.x / L};
}

int local_index(const Mesh &mesh, int t, int edge)
{
  const auto &te = mesh.triangle_edges(t);
  for (int k = 0; k < 3; ++k) {
    if (te[k] == edge) {
      return k;
    }
  }
  return -1;
}

cplx flux(const Grad &g, Vec2 n) { return g[0] * n.x + g[1] * n.y; }

}  // namespace

std::vector<double> error_indicators(const Mesh &mesh, const Vector &u, const MaterialMap &mat,
                                     const DtnConfig &cfg, const TbcData &data)
{
  if (u.size() != mesh.num_nodes()) {
    throw PreconditionError("error_indicators: solution does not match the mesh");
  }
  const bool te = cfg.pol == Polarization::TE;
  const int nt = mesh.num_triangles();
  const auto &X = mesh.nodes();

  std::vector<Grad> grad(nt);
  std::vector<cplx> weight(nt, cplx{1.0, 0.0});  // kappa^-2 for TE
  for (int t = 0; t < nt; ++t) {
    grad[t] = gradient(mesh, u, t);
    if (te) {
      weight[t] = 1.0 / mat.kappa_squared(mesh.triangles()[t].region);
    }
  }

  // Trace coefficients for the nonlocal term on the arc.
  std::vector<cplx> trace_coef;
  {
    bool has_arc = false;
    for (const auto &e : mesh.edges()) {
      has_arc = has_arc || e.tag == EdgeTag::Arc;
    }
    if (has_arc) {
      const BoundaryArc arc = boundary_arc(mesh);
      std::vector<cplx> trace(arc.size());
      for (int i = 0; i < arc.size(); ++i) {
        trace[i] = u[arc.nodes[i]];
      }
      trace_coef = trace_fourier_coefficients(arc, trace, cfg);
    }
  }

  // h_e * ||J_e||^2 per edge.
  const auto &edges = mesh.edges();
  std::vector<double> edge_term(edges.size(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const MeshEdge &E = edges[e];
    const double he = norm(X[E.v[1]] - X[E.v[0]]);
    const int t0 = E.tri[0];
    const int k0 = local_index(mesh, t0, static_cast<int>(e));
    const Vec2 n0 = outward_normal(mesh, t0, k0);
    if (E.tri[1] >= 0) {
      const int t1 = E.tri[1];
      const cplx jump = -(weight[t0] * flux(grad[t0], n0) - weight[t1] * flux(grad[t1], n0));
      edge_term[e] = he * he * std::norm(jump);
      continue;
    }
    if (E.tag == EdgeTag::Arc) {
      using G = detail::Gauss4;
      const auto &v = mesh.triangles()[t0].v;
      const Vec2 a = X[v[(k0 + 1) % 3]];
      const Vec2 b = X[v[(k0 + 2) % 3]];
      const cplx normal_flux = flux(grad[t0], n0);
      const double scale = te ? 2.0 / (cfg.kappa0 * cfg.kappa0) : 2.0;
      double integral = 0.0;
      for (std::size_t q = 0; q < G::x.size(); ++q) {
        const Vec2 p = (1.0 - G::x[q]) * a + G::x[q] * b;
        const double phi = std::atan2(p.y, p.x);
        const cplx J = scale * (dtn_evaluate(trace_coef, cfg, phi) - normal_flux + data(phi));
        integral += G::w[q] * he * std::norm(J);
      }
      edge_term[e] = he * integral;
    } else if (te) {
      const cplx J = 2.0 * (-weight[t0] * flux(grad[t0], n0));
      edge_term[e] = he * he * std::norm(J);
    }
  }

  std::vector<double> eta(nt);
  for (int t = 0; t < nt; ++t) {
    const auto &v = mesh.triangles()[t].v;
    const double area = mesh.area(t);
    double sum_abs2 = 0.0;
    cplx sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      sum_abs2 += std::norm(u[v[k]]);
      sum += u[v[k]];
    }
    // Exact L2 norm of a P1 function on a triangle.
    const double l2sq = area / 12.0 * (sum_abs2 + std::norm(sum));
    const double res_scale = te ? 1.0 : std::abs(mat.kappa_squared(mesh.triangles()[t].region));
    const double interior = mesh.diameter(t) * res_scale * std::sqrt(l2sq);
    double jumps = 0.0;
    for (int e : mesh.triangle_edges(t)) {
      jumps += edge_term[e];
    }
    eta[t] = interior + std::sqrt(0.5 * jumps);
  }
  return eta;
}

double element_indicator(const Mesh &mesh, const Vector &u, const MaterialMap &mat,
                         const DtnConfig &cfg, const TbcData &data, int triangle)
{
  if (triangle < 0 || triangle >= mesh.num_triangles()) {
    throw PreconditionError("element_indicator: triangle id out of range");
  }
  return error_indicators(mesh, u, mat, cfg, data)[triangle];
}

double truncation_error(double kappa0, double R, double R_hat, int N, double ref_norm)
{
  const double x = std::exp(1.0) * kappa0 * R / 2.0;
  if (!(N > x)) {
    std::ostringstream msg;
    msg << "truncation_error: N = " << N << " does not exceed e kappa0 R / 2 = " << x;
    throw PreconditionError(msg.str());
  }
  if (!(R_hat >= 0.0 && R_hat < R)) {
    throw PreconditionError("truncation_error: R_hat must satisfy 0 <= R_hat < R");
  }
  if (ref_norm == 0.0) {
    return 0.0;
  }
  const double log1 = R_hat > 0.0 ? N * std::log(R_hat / R) : -std::numeric_limits<double>::infinity();
  const double log2 = (2.0 * N + 4.0) * std::log(x / N);
  const double top = std::max(log1, log2);
  const double lse = top + std::log(std::exp(log1 - top) + std::exp(log2 - top));
  return std::exp(std::log(ref_norm) + lse);
}

double truncation_error(const DtnConfig &cfg, double ref_norm)
{
  return truncation_error(cfg.kappa0, cfg.R, cfg.R_hat, cfg.N, ref_norm);
}

int select_truncation_order(double kappa0, double R, double R_hat, double ref_norm,
                            double target)
{
  const double x = std::exp(1.0) * kappa0 * R / 2.0;
  for (int N = std::max(1, static_cast<int>(std::floor(x)) + 1); N <= specfun::kMaxOrder; ++N) {
    if (truncation_error(kappa0, R, R_hat, N, ref_norm) <= target) {
      return N;
    }
  }
  std::ostringstream msg;
  msg << "select_truncation_order: no N <= " << specfun::kMaxOrder << " reaches " << target;
  throw NumericalError(msg.str());
}

std::vector<int> mark(const ErrorReport &report, double tau)
{
  if (report.eta.empty()) {
    throw PreconditionError("mark: empty error report");
  }
  const double top = *std::max_element(report.eta.begin(), report.eta.end());
  std::vector<int> marked;
  for (int t = 0; t < static_cast<int>(report.eta.size()); ++t) {
    if (report.eta[t] >= tau * top) {
      marked.push_back(t);
    }
  }
  return marked;
}

DtnConfig make_dtn_config(const Problem &problem, const Mesh &initial, double epsN_target)
{
  const double k0 = problem.wave.kappa0;
  const double R = problem.geom.R;
  int N = problem.N;
  if (N <= 0) {
    const double ref_norm = ref_field_h1_norm(initial, problem.wave, problem.pol);
    N = select_truncation_order(k0, R, problem.geom.R_hat, ref_norm, epsN_target);
  }
  return DtnConfig::make(problem.pol, k0, R, problem.geom.R_hat, N);
}

Solution solve_on_mesh(const Mesh &mesh, const Problem &problem, const DtnConfig &cfg,
                       const TbcData &data)
{
  const GlobalSystem sys = build_system(mesh, problem.materials, problem.wave, cfg, data);
  if (sys.dimension() == 0) {
    throw PreconditionError("solve: every node is constrained, the system is empty");
  }
  const Vector x = solve_system(sys);
  return Solution{mesh, sys.expand(x), cfg, sys.dimension()};
}

AdaptiveResult adaptive_solve(const Problem &problem, const AdaptConfig &acfg,
                              const IterationObserver &observer)
{
  acfg.validate();
  Mesh mesh = initial_mesh(problem.geom, problem.h0);
  const double ref_norm = ref_field_h1_norm(mesh, problem.wave, problem.pol);
  const DtnConfig cfg = make_dtn_config(problem, mesh, acfg.epsN_target);
  const double eps_N = truncation_error(cfg, ref_norm);
  const TbcData data(problem.pol, problem.wave, problem.geom.R, problem.tbc_tol, cfg.N);

  AdaptiveResult result;
  for (int iter = 0;; ++iter) {
    Solution sol = solve_on_mesh(mesh, problem, cfg, data);
    ErrorReport rep;
    rep.eta = error_indicators(sol.mesh, sol.u, problem.materials, cfg, data);
    rep.eps_h = std::sqrt(std::accumulate(rep.eta.begin(), rep.eta.end(), 0.0,
                                          [](double s, double e) { return s + e * e; }));
    rep.eps_N = eps_N;
    rep.dof = sol.dof;
    rep.iteration = iter;
    if (observer) {
      observer(sol, rep);
    }
    const bool done =
      rep.eps_h <= acfg.tol || rep.dof >= acfg.max_dof || iter + 1 >= acfg.max_iter;
    std::vector<int> marked;
    if (!done) {
      if (acfg.mode == RefinementMode::Uniform) {
        marked.resize(mesh.num_triangles());
        std::iota(marked.begin(), marked.end(), 0);
      } else {
        marked = mark(rep, acfg.tau);
      }
    }
    result.history.push_back(std::move(rep));
    if (done) {
      result.solution = std::move(sol);
      break;
    }
    mesh = refine(mesh, marked);
  }
  return result;
}

void write_convergence_csv(std::ostream &out, const std::vector<ConvergenceRow> &rows)
{
  out << "iter,dof,eps_h,eps_N,rcs_linear\n";
  char buf[128];
  for (const ConvergenceRow &r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", r.iter, r.dof, r.eps_h, r.eps_N,
                  r.rcs_linear);
    out << buf;
  }
}

}  // namespace cavity
