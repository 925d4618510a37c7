// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/assembly.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

#include "quadrature.hpp"

namespace cavity
{

SparseMatrix assemble_interior(const Mesh &mesh, const MaterialMap &mat, Polarization pol)
{
  const auto &X = mesh.nodes();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(9 * mesh.triangles().size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle &tri = mesh.triangles()[t];
    const double area = mesh.area(t);
    if (!(area > 0.0)) {
      throw GeometryError("assembly: triangle " + std::to_string(t) + " has non-positive area");
    }
    std::array<Vec2, 3> g;
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = X[tri.v[(k + 1) % 3]];
      const Vec2 b = X[tri.v[(k + 2) % 3]];
      g[k] = {(a.y - b.y) / (2.0 * area), (b.x - a.x) / (2.0 * area)};
    }
    const cplx k2 = mat.kappa_squared(tri.region);
    cplx stiff_scale{1.0, 0.0};
    cplx mass_scale = -k2;
    if (pol == Polarization::TE) {
      stiff_scale = 1.0 / k2;
      mass_scale = -1.0;
    }
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        const double stiff = area * dot(g[k], g[l]);
        const double mass = area / 12.0 * (k == l ? 2.0 : 1.0);
        trip.emplace_back(tri.v[k], tri.v[l], stiff_scale * stiff + mass_scale * mass);
      }
    }
  }
  SparseMatrix A(mesh.num_nodes(), mesh.num_nodes());
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

Vector assemble_tbc_load(const Mesh &mesh, const BoundaryArc &arc,
                         const std::function<cplx(double)> &data, Polarization pol,
                         double kappa0)
{
  using G = detail::Gauss4;
  const auto &X = mesh.nodes();
  Vector b = Vector::Zero(mesh.num_nodes());
  for (int k = 0; k + 1 < arc.size(); ++k) {
    const int i = arc.nodes[k];
    const int j = arc.nodes[k + 1];
    const double len = arc.chord[k];
    for (std::size_t q = 0; q < G::x.size(); ++q) {
      const double s = G::x[q];
      const Vec2 p = (1.0 - s) * X[i] + s * X[j];
      const cplx f = data(std::atan2(p.y, p.x));
      b[i] += G::w[q] * len * (1.0 - s) * f;
      b[j] += G::w[q] * len * s * f;
    }
  }
  if (pol == Polarization::TE) {
    b /= kappa0 * kappa0;
  }
  return b;
}

Vector GlobalSystem::expand(const Vector &x) const
{
  Vector u(static_cast<Eigen::Index>(dof_of_node.size()));
  for (std::size_t n = 0; n < dof_of_node.size(); ++n) {
    const int d = dof_of_node[n];
    u[n] = d >= 0 ? x[d] : fixed_values[n];
  }
  return u;
}

Vector GlobalSystem::apply(const Vector &x) const
{
  if (x.size() != dimension()) {
    throw PreconditionError("apply: vector has the wrong length");
  }
  Vector y = B * x;
  const int M = static_cast<int>(arc_dofs.size());
  for (int n = 0; n < num_modes(); ++n) {
    if (alpha[n] == cplx{0.0, 0.0}) {
      continue;
    }
    cplx proj = 0.0;
    for (int i = 0; i < M; ++i) {
      if (arc_dofs[i] >= 0) {
        proj += W(n, i) * x[arc_dofs[i]];
      }
    }
    const cplx scaled = alpha[n] * proj;
    for (int i = 0; i < M; ++i) {
      if (arc_dofs[i] >= 0) {
        y[arc_dofs[i]] -= W(n, i) * scaled;
      }
    }
  }
  return y;
}

SparseMatrix GlobalSystem::matrix() const
{
  const int M = static_cast<int>(arc_dofs.size());
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(M) * M);
  for (int j = 0; j < M; ++j) {
    if (arc_dofs[j] < 0) {
      continue;
    }
    for (int i = j; i < M; ++i) {
      if (arc_dofs[i] < 0) {
        continue;
      }
      cplx f = 0.0;
      for (int n = 0; n < num_modes(); ++n) {
        f += alpha[n] * (W(n, j) * W(n, i));
      }
      trip.emplace_back(arc_dofs[j], arc_dofs[i], -f);
      if (i != j) {
        trip.emplace_back(arc_dofs[i], arc_dofs[j], -f);
      }
    }
  }
  SparseMatrix F(B.rows(), B.cols());
  F.setFromTriplets(trip.begin(), trip.end());
  return B + F;
}

SparseMatrix GlobalSystem::bordered() const
{
  const int n = dimension();
  const int M = static_cast<int>(arc_dofs.size());
  std::vector<int> modes;
  for (int k = 0; k < num_modes(); ++k) {
    if (alpha[k] != cplx{0.0, 0.0}) {
      modes.push_back(k);
    }
  }
  const int m = static_cast<int>(modes.size());
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(B.nonZeros() + 2 * static_cast<std::size_t>(m) * M + m);
  for (int col = 0; col < B.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(B, col); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < m; ++k) {
    const int mode = modes[k];
    const int row = n + k;
    for (int i = 0; i < M; ++i) {
      const double w = W(mode, i);
      if (arc_dofs[i] < 0 || w == 0.0) {
        continue;
      }
      const cplx v = -alpha[mode] * w;
      trip.emplace_back(row, arc_dofs[i], v);
      trip.emplace_back(arc_dofs[i], row, v);
    }
    trip.emplace_back(row, row, alpha[mode]);
  }
  SparseMatrix K(n + m, n + m);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

GlobalSystem full_system(SparseMatrix B, Vector rhs, Polarization pol, int generation)
{
  GlobalSystem s;
  const int n = static_cast<int>(B.rows());
  s.B = std::move(B);
  s.rhs = std::move(rhs);
  s.pol = pol;
  s.generation = generation;
  s.dof_of_node.resize(n);
  s.node_of_dof.resize(n);
  for (int i = 0; i < n; ++i) {
    s.dof_of_node[i] = s.node_of_dof[i] = i;
  }
  s.fixed_values.assign(n, cplx{0.0, 0.0});
  s.W.resize(0, 0);
  s.alpha.resize(0);
  return s;
}

GlobalSystem eliminate(const GlobalSystem &system, const std::vector<bool> &fixed,
                       std::span<const cplx> values)
{
  const int n = system.dimension();
  if (static_cast<int>(fixed.size()) != n || static_cast<int>(values.size()) != n) {
    throw PreconditionError("eliminate: mask and values must cover every unknown");
  }
  GlobalSystem out;
  out.pol = system.pol;
  out.generation = system.generation;
  out.fixed_values = system.fixed_values;
  out.dof_of_node.assign(system.dof_of_node.size(), -1);

  std::vector<int> new_index(n, -1);
  for (int i = 0; i < n; ++i) {
    const int node = system.node_of_dof[i];
    if (fixed[i]) {
      out.fixed_values[node] = values[i];
    } else {
      new_index[i] = static_cast<int>(out.node_of_dof.size());
      out.dof_of_node[node] = new_index[i];
      out.node_of_dof.push_back(node);
    }
  }
  const int m = out.dimension();
  out.rhs = Vector::Zero(m);
  for (int i = 0; i < n; ++i) {
    if (new_index[i] >= 0) {
      out.rhs[new_index[i]] = system.rhs[i];
    }
  }
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(system.B.nonZeros());
  for (int col = 0; col < system.B.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(system.B, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      if (new_index[r] < 0) {
        continue;
      }
      if (new_index[c] >= 0) {
        trip.emplace_back(new_index[r], new_index[c], it.value());
      } else if (values[c] != cplx{0.0, 0.0}) {
        out.rhs[new_index[r]] -= it.value() * values[c];
      }
    }
  }
  out.B.resize(m, m);
  out.B.setFromTriplets(trip.begin(), trip.end());

  // The low-rank block follows the same rule: its known columns move to the right-hand side.
  out.W = system.W;
  out.alpha = system.alpha;
  out.arc_dofs.assign(system.arc_dofs.size(), -1);
  const int M = static_cast<int>(system.arc_dofs.size());
  for (int k = 0; k < system.num_modes(); ++k) {
    cplx known = 0.0;
    for (int i = 0; i < M; ++i) {
      const int d = system.arc_dofs[i];
      if (d >= 0 && new_index[d] < 0) {
        known += system.W(k, i) * values[d];
      }
    }
    if (known == cplx{0.0, 0.0}) {
      continue;
    }
    for (int i = 0; i < M; ++i) {
      const int d = system.arc_dofs[i];
      if (d >= 0 && new_index[d] >= 0) {
        out.rhs[new_index[d]] += system.alpha[k] * system.W(k, i) * known;
      }
    }
  }
  for (int i = 0; i < M; ++i) {
    const int d = system.arc_dofs[i];
    out.arc_dofs[i] = d >= 0 ? new_index[d] : -1;
  }
  return out;
}

GlobalSystem apply_dirichlet(const GlobalSystem &system, const Mesh &mesh)
{
  if (system.pol != Polarization::TM) {
    throw PreconditionError("apply_dirichlet: the TE boundary condition is natural");
  }
  const auto pec = mesh.pec_nodes();
  const int n = system.dimension();
  std::vector<bool> fixed(n);
  for (int i = 0; i < n; ++i) {
    fixed[i] = pec[system.node_of_dof[i]];
  }
  const std::vector<cplx> zeros(n, cplx{0.0, 0.0});
  return eliminate(system, fixed, zeros);
}

GlobalSystem build_system(const Mesh &mesh, const MaterialMap &mat, const IncidentWave &wave,
                          const DtnConfig &cfg, const TbcData &data)
{
  if (std::abs(cfg.kappa0 - wave.kappa0) > 1e-12 * wave.kappa0 ||
      std::abs(cfg.kappa0 - mat.kappa0()) > 1e-12 * mat.kappa0()) {
    throw PreconditionError("build_system: inconsistent free-space wavenumbers");
  }
  if (std::abs(cfg.R - mesh.arc_radius()) > 1e-12 * cfg.R) {
    throw PreconditionError("build_system: DtN radius differs from the mesh arc radius");
  }
  mat.check(mesh, cfg.pol);

  const BoundaryArc arc = boundary_arc(mesh);
  Vector rhs = assemble_tbc_load(mesh, arc, [&data](double phi) { return data(phi); }, cfg.pol,
                                 cfg.kappa0);
  GlobalSystem sys = full_system(assemble_interior(mesh, mat, cfg.pol), std::move(rhs), cfg.pol,
                                 mesh.generation());
  const double s = cfg.pol == Polarization::TM ? 1.0 : 1.0 / (cfg.kappa0 * cfg.kappa0);
  const std::vector<cplx> a = tbc_mode_factors(cfg);
  sys.arc_dofs = arc.nodes;
  sys.W = basis_weights(arc, cfg);
  sys.alpha.resize(static_cast<Eigen::Index>(a.size()));
  for (std::size_t n = 0; n < a.size(); ++n) {
    sys.alpha[static_cast<Eigen::Index>(n)] = s * a[n];
  }
  if (cfg.pol == Polarization::TM) {
    sys = apply_dirichlet(sys, mesh);
  }
  return sys;
}

void write_matrix(std::ostream &out, const SparseMatrix &A)
{
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (int col = 0; col < A.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
          << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace cavity
