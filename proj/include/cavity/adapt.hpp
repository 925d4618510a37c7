// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_ADAPT_HPP
#define CAVITY_ADAPT_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include "cavity/assembly.hpp"
#include "cavity/dtn.hpp"
#include "cavity/geometry.hpp"
#include "cavity/physics.hpp"

namespace cavity
{

struct ErrorReport
{
  std::vector<double> eta;  // per triangle
  double eps_h = 0.0;       // sqrt(sum eta^2)
  double eps_N = 0.0;
  int dof = 0;              // number of unknowns of the linear system
  int iteration = 0;
};

enum class RefinementMode
{
  Adaptive,
  Uniform
};

struct AdaptConfig
{
  double tau = 0.5;
  double tol = 0.0;  // stop once eps_h <= tol
  int max_dof = 15000;
  int max_iter = 100;
  double epsN_target = 1e-8;
  RefinementMode mode = RefinementMode::Adaptive;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

// Discrete total field on a mesh together with the operator used to compute it.
struct Solution
{
  Mesh mesh;
  Vector u;  // nodal values on every mesh node
  DtnConfig dtn;
  int dof = 0;
};

// Everything that defines one scattering problem.
struct Problem
{
  Polarization pol = Polarization::TM;
  CavityGeometry geom;
  MaterialMap materials{1.0};
  IncidentWave wave;
  double h0 = 0.0;        // initial mesh size
  int N = 0;              // DtN truncation order; 0 selects it from epsN_target
  double tbc_tol = 1e-15;  // relative cut-off of the TBC data series
};

// Residual indicators for every triangle.
std::vector<double> error_indicators(const Mesh &mesh, const Vector &u, const MaterialMap &mat,
                                     const DtnConfig &cfg, const TbcData &data);
double element_indicator(const Mesh &mesh, const Vector &u, const MaterialMap &mat,
                         const DtnConfig &cfg, const TbcData &data, int triangle);

// [(R_hat/R)^N + (e kappa0 R / (2N))^(2N+4)] * ref_norm, evaluated in log space.
double truncation_error(double kappa0, double R, double R_hat, int N, double ref_norm);
double truncation_error(const DtnConfig &cfg, double ref_norm);

// Smallest admissible N with truncation_error <= target.
int select_truncation_order(double kappa0, double R, double R_hat, double ref_norm,
                            double target);

// Triangles with eta >= tau * max eta.
std::vector<int> mark(const ErrorReport &report, double tau);

// Assemble and solve on a fixed mesh.
Solution solve_on_mesh(const Mesh &mesh, const Problem &problem, const DtnConfig &cfg,
                       const TbcData &data);

struct AdaptiveResult
{
  Solution solution;
  std::vector<ErrorReport> history;
};

// Called after every solve with the current solution and its report.
using IterationObserver = std::function<void(const Solution &, const ErrorReport &)>;

// Solve, estimate, mark, refine until eps_h <= tol, dof >= max_dof or max_iter solves.
AdaptiveResult adaptive_solve(const Problem &problem, const AdaptConfig &acfg,
                              const IterationObserver &observer = {});

// One line of the convergence log.
struct ConvergenceRow
{
  int iter = 0;
  int dof = 0;
  double eps_h = 0.0;
  double eps_N = 0.0;
  double rcs_linear = 0.0;
};

// Header "iter,dof,eps_h,eps_N,rcs_linear", values with 17 significant digits.
void write_convergence_csv(std::ostream &out, const std::vector<ConvergenceRow> &rows);

// Chooses N (explicit or from the target) and builds the DtN operator for the problem.
DtnConfig make_dtn_config(const Problem &problem, const Mesh &initial, double epsN_target);

}  // namespace cavity

#endif  // CAVITY_ADAPT_HPP
