// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "cavity/assembly.hpp"
#include "cavity/linsolve.hpp"
#include "cavity/specfun.hpp"

using namespace cavity;

namespace
{

Mesh reference_triangle()
{
  const std::vector<Vec2> X{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<Triangle> T{{{0, 1, 2}, 0}};
  const std::vector<TaggedEdge> tags{{0, 1, EdgeTag::Wall}, {1, 2, EdgeTag::Wall}, {2, 0, EdgeTag::Wall}};
  return Mesh(X, T, tags, 1.0);
}

Eigen::MatrixXcd dense(const SparseMatrix &A) { return Eigen::MatrixXcd(A); }

std::vector<int> all_triangles(const Mesh &m)
{
  std::vector<int> ids(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    ids[t] = t;
  }
  return ids;
}

// Exact element matrices of the reference triangle.
const Eigen::Matrix3d kRefStiffness =
  (Eigen::Matrix3d() << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5).finished();
const Eigen::Matrix3d kRefMass =
  (Eigen::Matrix3d() << 2, 1, 1, 1, 2, 1, 1, 1, 2).finished() / 24.0;

// The global system of a mesh with arc, TBC block attached but no elimination.
GlobalSystem with_tbc(const Mesh &mesh, const MaterialMap &mat, const DtnConfig &cfg,
                      const std::function<cplx(double)> &data)
{
  const BoundaryArc arc = boundary_arc(mesh);
  GlobalSystem sys = full_system(assemble_interior(mesh, mat, cfg.pol),
                                 assemble_tbc_load(mesh, arc, data, cfg.pol, cfg.kappa0), cfg.pol,
                                 mesh.generation());
  sys.arc_dofs = arc.nodes;
  sys.W = basis_weights(arc, cfg);
  const auto a = tbc_mode_factors(cfg);
  const double s = cfg.pol == Polarization::TM ? 1.0 : 1.0 / (cfg.kappa0 * cfg.kappa0);
  sys.alpha.resize(static_cast<Eigen::Index>(a.size()));
  for (std::size_t n = 0; n < a.size(); ++n) {
    sys.alpha[static_cast<Eigen::Index>(n)] = s * a[n];
  }
  return sys;
}

}  // namespace

TEST_CASE("element matrices of the reference triangle")
{
  const Mesh m = reference_triangle();
  MaterialMap mat(2.0);
  const Eigen::MatrixXcd tm = dense(assemble_interior(m, mat, Polarization::TM));
  const Eigen::MatrixXcd te = dense(assemble_interior(m, mat, Polarization::TE));
  const Eigen::MatrixXcd tm_expect = (kRefStiffness - 4.0 * kRefMass).cast<cplx>();
  const Eigen::MatrixXcd te_expect = (kRefStiffness / 4.0 - kRefMass).cast<cplx>();
  CHECK((tm - tm_expect).norm() <= 1e-15);
  CHECK((te - te_expect).norm() <= 1e-15);

  mat.set(0, {{4.0, 1.0}, {1.0, 0.0}});
  const cplx k2 = 4.0 * cplx{4.0, 1.0};
  const Eigen::MatrixXcd lossy = dense(assemble_interior(m, mat, Polarization::TE));
  const Eigen::MatrixXcd lossy_expect =
    kRefStiffness.cast<cplx>() / k2 - kRefMass.cast<cplx>();
  CHECK((lossy - lossy_expect).norm() <= 1e-15);
}

TEST_CASE("global matrix is the sum of element contributions")
{
  const Mesh m = initial_mesh(CavityGeometry::rectangular(1.0, 0.4, 1.0), 0.3);
  MaterialMap mat(3.0);
  const SparseMatrix A = assemble_interior(m, mat, Polarization::TM);
  // 1^T A 1 = -kappa^2 |Omega| since stiffness rows sum to zero and mass entries sum to the area.
  double area = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    area += m.area(t);
  }
  const Vector one = Vector::Ones(m.num_nodes());
  const cplx total = one.dot(A * one);
  CHECK(std::abs(total + 9.0 * area) <= 1e-12 * 9.0 * area);
  // x^T K x for x linear: integral of |grad x|^2 over Omega = area.
  const SparseMatrix K = assemble_interior(m, MaterialMap(1e-8), Polarization::TM);
  Vector x(m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) {
    x[i] = m.nodes()[i].x;
  }
  CHECK(std::abs(x.dot(K * x) - area) <= 1e-10 * area);
  CHECK((dense(A) - dense(A).transpose()).norm() == 0.0);
}

TEST_CASE("TBC load of constant data is the hat-function integral")
{
  const Mesh m = initial_mesh(CavityGeometry::rectangular(1.0, 0.4, 1.0), 0.3);
  const BoundaryArc arc = boundary_arc(m);
  const Vector tm = assemble_tbc_load(m, arc, [](double) { return cplx{1.0, 0.0}; }, Polarization::TM, 2.0);
  const Vector te = assemble_tbc_load(m, arc, [](double) { return cplx{1.0, 0.0}; }, Polarization::TE, 2.0);
  double total = 0.0;
  for (int i = 0; i < arc.size(); ++i) {
    const double expect = 0.5 * (arc.left(i) + arc.right(i));
    CHECK(std::abs(tm[arc.nodes[i]] - expect) <= 1e-15);
    CHECK(std::abs(te[arc.nodes[i]] - expect / 4.0) <= 1e-15);
    total += tm[arc.nodes[i]].real();
  }
  CHECK(std::abs(total - arc.polygon_length()) <= 1e-14);
  CHECK(std::abs(tm.sum() - total) <= 1e-14);
}

TEST_CASE("elimination agrees with the row-replacement formulation")
{
  const int n = 12;
  std::mt19937 rng(1);
  std::normal_distribution<double> G;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      A(i, j) = A(j, i) = cplx{G(rng), G(rng)};
    }
    A(i, i) += 10.0;
  }
  Vector b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = {G(rng), G(rng)};
  }
  std::vector<bool> fixed(n, false);
  std::vector<cplx> values(n, cplx{0.0, 0.0});
  for (int i : {0, 3, 7, 11}) {
    fixed[i] = true;
    values[i] = {G(rng), G(rng)};
  }
  // Oracle: replace fixed rows by identity rows.
  Eigen::MatrixXcd R = A;
  Vector rb = b;
  for (int i = 0; i < n; ++i) {
    if (fixed[i]) {
      R.row(i).setZero();
      R(i, i) = 1.0;
      rb[i] = values[i];
    }
  }
  const Vector expect = R.lu().solve(rb);

  const GlobalSystem full = full_system(A.sparseView(), b, Polarization::TM, 0);
  const GlobalSystem red = eliminate(full, fixed, values);
  CHECK(red.dimension() == n - 4);
  const Vector x = dense(red.matrix()).lu().solve(red.rhs);
  const Vector u = red.expand(x);
  CHECK((u - expect).norm() <= 1e-12 * expect.norm());
  CHECK_THROWS_AS(eliminate(full, std::vector<bool>(n - 1), values), PreconditionError);
}

TEST_CASE("low-rank TBC block: explicit matrix, apply and bordered form agree")
{
  const Mesh m = initial_mesh(CavityGeometry::rectangular(1.0, 0.4, 1.0), 0.25);
  MaterialMap mat(4.0);
  const TbcData data(Polarization::TM, IncidentWave(4.0, 0.3), 1.0, 1e-15);
  for (Polarization pol : {Polarization::TM, Polarization::TE}) {
    const DtnConfig cfg = DtnConfig::make(pol, 4.0, 1.0, 0.0, 12);
    GlobalSystem sys = with_tbc(m, mat, cfg, [&](double p) { return data(p); });
    // Fix a few arc and interior nodes with nonzero values to exercise the moved columns.
    std::vector<bool> fixed(sys.dimension(), false);
    std::vector<cplx> values(sys.dimension(), cplx{0.0, 0.0});
    for (int k : {0, 2, 5}) {
      fixed[sys.arc_dofs[k]] = true;
      values[sys.arc_dofs[k]] = {1.0 + k, -0.5 * k};
    }
    fixed[0] = true;
    values[0] = {0.3, 0.1};
    const GlobalSystem red = eliminate(sys, fixed, values);

    const Eigen::MatrixXcd A = dense(red.matrix());
    CHECK((A - A.transpose()).norm() <= 1e-14 * A.norm());
    std::mt19937 rng(2);
    std::normal_distribution<double> G;
    Vector x(red.dimension());
    for (int i = 0; i < x.size(); ++i) {
      x[i] = {G(rng), G(rng)};
    }
    CHECK((red.apply(x) - A * x).norm() <= 1e-12 * (A * x).norm());

    // Dense oracle on the full system: row replacement, F taken from the dense TBC matrix.
    const TbcMatrix F = tbc_matrix(boundary_arc(m), cfg);
    Eigen::MatrixXcd Afull = dense(sys.B);
    const double s = pol == Polarization::TM ? 1.0 : 1.0 / 16.0;
    for (int i = 0; i < static_cast<int>(F.nodes.size()); ++i) {
      for (int j = 0; j < static_cast<int>(F.nodes.size()); ++j) {
        Afull(F.nodes[j], F.nodes[i]) -= s * F.F(j, i);
      }
    }
    Vector bfull = sys.rhs;
    for (int i = 0; i < sys.dimension(); ++i) {
      if (fixed[i]) {
        Afull.row(i).setZero();
        Afull(i, i) = 1.0;
        bfull[i] = values[i];
      }
    }
    const Vector expect = Afull.lu().solve(bfull);
    const Vector u = red.expand(solve_system(red));
    CHECK((u - expect).norm() <= 1e-9 * expect.norm());

    // Bordered form: (x, W x) solves it.
    const Eigen::MatrixXcd Bd = dense(red.bordered());
    CHECK((Bd - Bd.transpose()).norm() <= 1e-14 * Bd.norm());
    const Vector xs = solve_system(red);
    Vector ext = Vector::Zero(Bd.rows());
    ext.head(xs.size()) = xs;
    int row = xs.size();
    for (int k = 0; k < red.num_modes(); ++k) {
      if (red.alpha[k] == cplx{0.0, 0.0}) {
        continue;
      }
      cplx lam = 0.0;
      for (int i = 0; i < static_cast<int>(red.arc_dofs.size()); ++i) {
        if (red.arc_dofs[i] >= 0) {
          lam += red.W(k, i) * xs[red.arc_dofs[i]];
        }
      }
      ext[row++] = lam;
    }
    REQUIRE(row == Bd.rows());
    Vector ebig = Vector::Zero(Bd.rows());
    ebig.head(xs.size()) = red.rhs;
    CHECK((Bd * ext - ebig).norm() <= 1e-9 * red.rhs.norm());
  }
}

TEST_CASE("build_system: dimension and Dirichlet nodes")
{
  const CavityGeometry g = CavityGeometry::rectangular(1.0, 0.4, 1.0);
  const Mesh m = initial_mesh(g, 0.2);
  MaterialMap mat(4.0);
  const IncidentWave w(4.0, 0.2);
  int free_nodes = 0;
  for (bool b : m.pec_nodes()) {
    free_nodes += b ? 0 : 1;
  }
  const GlobalSystem tm = build_system(m, mat, w, DtnConfig::make(Polarization::TM, 4.0, 1.0, 0.0, 12),
                                       TbcData(Polarization::TM, w, 1.0, 1e-15));
  CHECK(tm.dimension() == free_nodes);
  const GlobalSystem te = build_system(m, mat, w, DtnConfig::make(Polarization::TE, 4.0, 1.0, 0.0, 12),
                                       TbcData(Polarization::TE, w, 1.0, 1e-15));
  CHECK(te.dimension() == m.num_nodes());
  CHECK_THROWS_AS(apply_dirichlet(te, m), PreconditionError);
  CHECK_THROWS_AS(build_system(m, MaterialMap(5.0), w,
                               DtnConfig::make(Polarization::TM, 4.0, 1.0, 0.0, 12),
                               TbcData(Polarization::TM, w, 1.0, 1e-15)),
                  PreconditionError);
  std::ostringstream out;
  write_matrix(out, tm.B);
  int lines = 0;
  for (char c : out.str()) {
    lines += c == '\n' ? 1 : 0;
  }
  CHECK(lines == tm.B.nonZeros());
}

TEST_CASE("manufactured solution J2(kr) sin(2 phi) converges at second order")
{
  // Smooth Helmholtz solution; it is not outgoing, so the TBC data is
  // f = d_r u - T u = kappa (J2' - J2 H2'/H2) sin(2 phi), and the walls get its trace.
  const double k0 = 4.0;
  const double R = 1.0;
  const CavityGeometry g = CavityGeometry::rectangular(1.0, 0.3, R);
  MaterialMap mat(k0);
  const DtnConfig cfg = DtnConfig::make(Polarization::TM, k0, R, 0.0, 14);
  const double kr = k0 * R;
  const double j2 = specfun::bessel_j(2, kr);
  const double j2p = specfun::bessel_j(1, kr) - 2.0 / kr * j2;
  const cplx f2 = k0 * j2p - specfun::dtn_coefficient(2, k0, R) * j2;
  auto data = [&](double phi) { return f2 * std::sin(2 * phi); };
  auto exact = [&](Vec2 p) {
    const double r = norm(p);
    return r == 0.0 ? 0.0 : specfun::bessel_j(2, k0 * r) * 2.0 * p.x * p.y / (r * r);
  };

  Mesh m = initial_mesh(g, 0.1);
  std::vector<double> err;
  std::vector<double> dof;
  for (int level = 0; level < 7; ++level) {
    GlobalSystem sys = with_tbc(m, mat, cfg, data);
    const auto pec = m.pec_nodes();
    std::vector<cplx> values(m.num_nodes());
    for (int i = 0; i < m.num_nodes(); ++i) {
      values[i] = exact(m.nodes()[i]);
    }
    sys = eliminate(sys, pec, values);
    const Vector u = sys.expand(solve_system(sys));
    double e = 0.0;
    for (int i = 0; i < m.num_nodes(); ++i) {
      e = std::max(e, std::abs(u[i] - exact(m.nodes()[i])));
    }
    err.push_back(e);
    dof.push_back(sys.dimension());
    m = refine(m, all_triangles(m));
  }
  // One bisection pass halves the element area, so O(h^2) means error ~ dof^-1. Passes
  // alternate between edge directions, so the rate is fitted over all levels.
  CHECK(err[0] < 0.05);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int L = static_cast<int>(err.size());
  for (int l = 0; l < L; ++l) {
    const double lx = std::log(dof[l]);
    const double ly = std::log(err[l]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (L * sxy - sx * sy) / (L * sxx - sx * sx);
  MESSAGE("fitted nodal error slope " << slope << " at " << dof.back() << " dof");
  CHECK(slope < -0.8);
  CHECK(slope > -1.3);
}
