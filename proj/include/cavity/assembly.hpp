// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_ASSEMBLY_HPP
#define CAVITY_ASSEMBLY_HPP

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "cavity/dtn.hpp"
#include "cavity/geometry.hpp"
#include "cavity/physics.hpp"

namespace cavity
{

using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Vector = Eigen::VectorXcd;

// TM: K - kappa^2 M.  TE: kappa^-2 K - M.  Square over all mesh nodes.
SparseMatrix assemble_interior(const Mesh &mesh, const MaterialMap &mat, Polarization pol);

// Load vector over all mesh nodes: integral of data against the hat functions along the
// arc chords (four Gauss points per chord, data evaluated at the polar angle of each point).
// TE loads carry the factor kappa0^-2.
Vector assemble_tbc_load(const Mesh &mesh, const BoundaryArc &arc,
                         const std::function<cplx(double)> &data, Polarization pol,
                         double kappa0);

//
// Linear system on the free nodes, A = B - F. The interior part B is sparse; the TBC block
// is kept in its exact low-rank form F = W^T diag(alpha) W (one row of W per Fourier mode)
// so that a heavily refined arc does not create a dense block in the sparse matrix.
//
struct GlobalSystem
{
  SparseMatrix B;
  Vector rhs;
  std::vector<int> dof_of_node;  // -1 for eliminated nodes
  std::vector<int> node_of_dof;
  std::vector<cplx> fixed_values;  // per node; values of the eliminated nodes
  Polarization pol = Polarization::TM;
  int generation = 0;

  // TBC factors over the arc nodes (columns follow arc order).
  std::vector<int> arc_dofs;  // dof per arc node, -1 when eliminated
  Eigen::MatrixXd W;          // modes x arc nodes
  Vector alpha;               // per mode, sign and scaling included

  int dimension() const { return static_cast<int>(node_of_dof.size()); }
  int num_modes() const { return static_cast<int>(alpha.size()); }

  // A x without forming A.
  Vector apply(const Vector &x) const;
  // A = B - F assembled explicitly (dense arc block); meant for small systems and tests.
  SparseMatrix matrix() const;
  // Complex symmetric bordered matrix [[B, -W^T D], [-D W, D]] with D = diag(alpha). Its
  // solutions (x, lambda) satisfy A x = rhs and lambda = W x.
  SparseMatrix bordered() const;

  // Expands a solution vector back onto all mesh nodes, inserting the eliminated values.
  Vector expand(const Vector &x) const;
};

// Keeps every node as an unknown; no TBC coupling.
GlobalSystem full_system(SparseMatrix B, Vector rhs, Polarization pol, int generation);

// Symmetric elimination of prescribed nodal values: the known columns move to the
// right-hand side, the corresponding rows and columns are dropped.
GlobalSystem eliminate(const GlobalSystem &system, const std::vector<bool> &fixed,
                       std::span<const cplx> values);

// Homogeneous Dirichlet condition on S and the ground (TM only).
GlobalSystem apply_dirichlet(const GlobalSystem &system, const Mesh &mesh);

// Interior forms minus the TBC block, TBC load, and Dirichlet elimination for TM.
GlobalSystem build_system(const Mesh &mesh, const MaterialMap &mat, const IncidentWave &wave,
                          const DtnConfig &cfg, const TbcData &data);

// Coordinate text dump, one "row col re im" line per stored entry.
void write_matrix(std::ostream &out, const SparseMatrix &A);

}  // namespace cavity

#endif  // CAVITY_ASSEMBLY_HPP
