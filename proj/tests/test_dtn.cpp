// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "cavity/dtn.hpp"
#include "cavity/specfun.hpp"

using namespace cavity;

namespace
{

// Fan of M triangles around the origin with uniformly spaced arc nodes.
Mesh fan(int M, double R)
{
  std::vector<Vec2> X{{0.0, 0.0}};
  for (int i = 0; i <= M; ++i) {
    const double p = kPi * i / M;
    X.push_back(i == M ? Vec2{-R, 0.0} : Vec2{R * std::cos(p), R * std::sin(p)});
  }
  std::vector<Triangle> tris;
  std::vector<TaggedEdge> tags{{0, 1, EdgeTag::Ground}, {0, M + 1, EdgeTag::Ground}};
  for (int i = 1; i <= M; ++i) {
    tris.push_back({{i, i + 1, 0}, 0});
    tags.push_back({i, i + 1, EdgeTag::Arc});
  }
  return Mesh(X, tris, tags, R);
}

// Fan with randomly perturbed arc angles.
Mesh jittered_fan(int M, double R, unsigned seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  std::vector<Vec2> X{{0.0, 0.0}};
  for (int i = 0; i <= M; ++i) {
    const double p = i == 0 || i == M ? kPi * i / M : kPi * (i + U(rng)) / M;
    X.push_back(i == M ? Vec2{-R, 0.0} : Vec2{R * std::cos(p), R * std::sin(p)});
  }
  std::vector<Triangle> tris;
  std::vector<TaggedEdge> tags{{0, 1, EdgeTag::Ground}, {0, M + 1, EdgeTag::Ground}};
  for (int i = 1; i <= M; ++i) {
    tris.push_back({{i, i + 1, 0}, 0});
    tags.push_back({i, i + 1, EdgeTag::Arc});
  }
  return Mesh(X, tris, tags, R);
}

std::vector<cplx> sample(const BoundaryArc &arc, const DtnConfig &cfg, int m, cplx amp = 1.0)
{
  std::vector<cplx> v(arc.size());
  for (int i = 0; i < arc.size(); ++i) {
    v[i] = amp * cfg.basis(m, arc.phi[i]);
  }
  return v;
}

// Integral over segment k of (linear interpolant of g) times the hat of node i, by 3-point
// Gauss-Legendre in the arclength parameter.
double hat_integral(const BoundaryArc &arc, int i, const std::vector<double> &g)
{
  static const double xg[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double wg[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double total = 0.0;
  for (int k = std::max(0, i - 1); k <= std::min(arc.size() - 2, i); ++k) {
    for (int q = 0; q < 3; ++q) {
      const double s = 0.5 * (1.0 + xg[q]);
      const double gi = (1 - s) * g[k] + s * g[k + 1];
      const double hat = k == i ? 1 - s : s;
      total += 0.5 * wg[q] * arc.chord[k] * gi * hat;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("DtN configuration preconditions")
{
  CHECK_NOTHROW(DtnConfig::make(Polarization::TM, 10.0, 1.0, 0.0, 14));
  CHECK_THROWS_AS(DtnConfig::make(Polarization::TM, 10.0, 1.0, 0.0, 13), PreconditionError);
  CHECK_THROWS_AS(DtnConfig::make(Polarization::TM, 10.0, 1.0, 1.0, 20), PreconditionError);
  CHECK_THROWS_AS(DtnConfig::make(Polarization::TM, -1.0, 1.0, 0.0, 20), PreconditionError);
  CHECK_THROWS_AS(DtnConfig::make(Polarization::TE, 1.0, 1.0, 0.0, 0), PreconditionError);
  CHECK_THROWS_AS(DtnConfig::make(Polarization::TE, 1.0, 1.0, 0.0, specfun::kMaxOrder + 1),
                  PreconditionError);
  const DtnConfig c = DtnConfig::make(Polarization::TE, 3.0, 2.0, 0.5, 20);
  REQUIRE(c.coefficients.size() == 21);
  for (int n = 0; n <= 20; ++n) {
    CHECK(std::abs(c.coefficients[n] - specfun::dtn_coefficient(n, 3.0, 2.0)) <= 1e-14 * std::abs(c.coefficients[n]));
  }
}

TEST_CASE("basis weights match Gauss quadrature of interpolant times hat")
{
  const BoundaryArc arc = boundary_arc(jittered_fan(37, 1.3, 5));
  for (Polarization pol : {Polarization::TM, Polarization::TE}) {
    const DtnConfig cfg = DtnConfig::make(pol, 2.0, 1.3, 0.0, 12);
    const Eigen::MatrixXd W = basis_weights(arc, cfg);
    REQUIRE(W.rows() == 13);
    REQUIRE(W.cols() == arc.size());
    for (int n = cfg.first_mode(); n <= cfg.N; ++n) {
      std::vector<double> g(arc.size());
      for (int i = 0; i < arc.size(); ++i) {
        g[i] = cfg.basis(n, arc.phi[i]);
      }
      for (int i = 0; i < arc.size(); ++i) {
        CHECK(std::abs(W(n, i) - hat_integral(arc, i, g)) <= 1e-15);
      }
    }
    if (pol == Polarization::TM) {
      CHECK(W.row(0).norm() == 0.0);
    }
  }
}

TEST_CASE("Fourier coefficients of a sampled mode")
{
  const int M = 64;
  const double R = 0.7;
  const BoundaryArc arc = boundary_arc(fan(M, R));
  for (Polarization pol : {Polarization::TM, Polarization::TE}) {
    const DtnConfig cfg = DtnConfig::make(pol, 1.0, R, 0.0, 10);
    for (int m : {pol == Polarization::TM ? 1 : 0, 3}) {
      const auto c = trace_fourier_coefficients(arc, sample(arc, cfg, m, {2.0, -1.0}), cfg);
      for (int n = 0; n <= cfg.N; ++n) {
        const cplx expect = n == m ? cplx{2.0, -1.0} : cplx{0.0, 0.0};
        CAPTURE(m);
        CAPTURE(n);
        // Interpolation and chord errors are both O((m dphi)^2).
        const double dphi = kPi / M;
        CHECK(std::abs(c[n] - expect) <= 0.25 * std::pow(std::max(m, 1) * dphi, 2) * std::sqrt(5.0));
      }
    }
  }
}

TEST_CASE("DtN action on a sampled mode reproduces the Hankel ratio")
{
  const int M = 64;
  const double R = 1.0;
  const BoundaryArc arc = boundary_arc(fan(M, R));
  for (Polarization pol : {Polarization::TM, Polarization::TE}) {
    const DtnConfig cfg = DtnConfig::make(pol, 4.0, R, 0.0, 16);
    const int m = 2;
    const auto v = sample(arc, cfg, m);
    const auto out = dtn_apply_trace(arc, v, cfg);
    const cplx h = specfun::dtn_coefficient(m, 4.0, R);
    for (int i = 0; i < arc.size(); ++i) {
      CHECK(std::abs(out[i] - h * v[i]) <= 1e-2 * std::abs(h));
    }
  }
}

TEST_CASE("TBC matrix: symmetry, low-rank form, spectral action")
{
  const int M = 64;
  const double R = 1.0;
  const BoundaryArc arc = boundary_arc(fan(M, R));
  for (Polarization pol : {Polarization::TM, Polarization::TE}) {
    const DtnConfig cfg = DtnConfig::make(pol, 4.0, R, 0.0, 16);
    const TbcMatrix F = tbc_matrix(arc, cfg);
    REQUIRE(F.F.rows() == M + 1);
    CHECK(F.nodes == arc.nodes);
    for (int i = 0; i <= M; ++i) {
      for (int j = 0; j <= M; ++j) {
        CHECK(F.F(i, j) == F.F(j, i));
      }
    }
    const Eigen::MatrixXd W = basis_weights(arc, cfg);
    const auto a = tbc_mode_factors(cfg);
    Eigen::MatrixXcd low = Eigen::MatrixXcd::Zero(M + 1, M + 1);
    for (int n = 0; n <= cfg.N; ++n) {
      low += a[n] * (W.row(n).transpose() * W.row(n)).cast<cplx>();
    }
    CHECK((low - F.F).norm() <= 1e-13 * F.F.norm());
    if (pol == Polarization::TM) {
      CHECK(a[0] == cplx{0.0, 0.0});
    }

    // For a sampled mode, F v approximates h_m times the weights of that mode.
    const int m = 3;
    const auto v = sample(arc, cfg, m);
    Eigen::VectorXcd ve(M + 1);
    for (int i = 0; i <= M; ++i) {
      ve[i] = v[i];
    }
    const Eigen::VectorXcd Fv = F.F * ve;
    const cplx h = specfun::dtn_coefficient(m, 4.0, R);
    const Eigen::VectorXcd expect = h * W.row(m).transpose().cast<cplx>();
    CHECK((Fv - expect).norm() <= 1e-2 * expect.norm());
  }
}

TEST_CASE("DtN operators are linear and validate their input")
{
  const BoundaryArc arc = boundary_arc(jittered_fan(40, 1.0, 9));
  const DtnConfig cfg = DtnConfig::make(Polarization::TM, 3.0, 1.0, 0.0, 12);
  std::mt19937 rng(3);
  std::normal_distribution<double> G;
  std::vector<cplx> u(arc.size());
  std::vector<cplx> v(arc.size());
  std::vector<cplx> w(arc.size());
  const cplx a{0.3, -1.2};
  for (int i = 0; i < arc.size(); ++i) {
    u[i] = {G(rng), G(rng)};
    v[i] = {G(rng), G(rng)};
    w[i] = a * u[i] + v[i];
  }
  const auto Bu = dtn_apply_trace(arc, u, cfg);
  const auto Bv = dtn_apply_trace(arc, v, cfg);
  const auto Bw = dtn_apply_trace(arc, w, cfg);
  for (int i = 0; i < arc.size(); ++i) {
    CHECK(std::abs(Bw[i] - (a * Bu[i] + Bv[i])) <= 1e-12 * (1.0 + std::abs(Bw[i])));
  }
  u.pop_back();
  CHECK_THROWS_AS(dtn_apply_trace(arc, u, cfg), PreconditionError);
  CHECK_THROWS_AS(trace_fourier_coefficients(arc, u, cfg), PreconditionError);
}
