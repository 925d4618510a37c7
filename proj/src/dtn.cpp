// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/dtn.hpp"

#include <cmath>
#include <sstream>

#include "cavity/specfun.hpp"

namespace cavity
{

DtnConfig DtnConfig::make(Polarization pol, double kappa0, double R, double R_hat, int N)
{
  if (!(kappa0 > 0.0) || !(R > 0.0)) {
    throw PreconditionError("dtn: kappa0 and R must be positive");
  }
  if (!(R_hat >= 0.0 && R_hat < R)) {
    throw PreconditionError("dtn: R_hat must satisfy 0 <= R_hat < R");
  }
  const double threshold = std::exp(1.0) * kappa0 * R / 2.0;
  if (N < 1 || N > specfun::kMaxOrder || !(N > threshold)) {
    std::ostringstream msg;
    msg << "dtn: truncation order N = " << N << " must exceed e kappa0 R / 2 = " << threshold
        << " and lie in [1, " << specfun::kMaxOrder << "]";
    throw PreconditionError(msg.str());
  }
  DtnConfig cfg;
  cfg.pol = pol;
  cfg.kappa0 = kappa0;
  cfg.R = R;
  cfg.R_hat = R_hat;
  cfg.N = N;
  cfg.coefficients = specfun::dtn_coefficients(N, kappa0, R);
  return cfg;
}

namespace
{

void check_values(const BoundaryArc &arc, std::span<const cplx> values)
{
  if (static_cast<int>(values.size()) != arc.size()) {
    throw PreconditionError("dtn: trace has " + std::to_string(values.size()) +
                            " values for " + std::to_string(arc.size()) + " arc nodes");
  }
}

// Normalisation of mode n: (2 - delta_n0) / (pi R).
double mode_scale(int n, double R) { return (n == 0 ? 1.0 : 2.0) / (kPi * R); }

}  // namespace

Eigen::MatrixXd basis_weights(const BoundaryArc &arc, const DtnConfig &cfg)
{
  const int M = arc.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(cfg.N + 1, M);
  for (int n = cfg.first_mode(); n <= cfg.N; ++n) {
    for (int i = 0; i < M; ++i) {
      const double li = arc.left(i);
      const double lr = arc.right(i);
      const double s = cfg.basis(n, arc.phi[i]);
      double v = (li / 3.0 + lr / 3.0) * s;
      if (i > 0) {
        v += li / 6.0 * cfg.basis(n, arc.phi[i - 1]);
      }
      if (i + 1 < M) {
        v += lr / 6.0 * cfg.basis(n, arc.phi[i + 1]);
      }
      w(n, i) = v;
    }
  }
  return w;
}

std::vector<cplx> trace_fourier_coefficients(const BoundaryArc &arc,
                                             std::span<const cplx> values,
                                             const DtnConfig &cfg)
{
  check_values(arc, values);
  const Eigen::MatrixXd w = basis_weights(arc, cfg);
  std::vector<cplx> c(cfg.N + 1, cplx{0.0, 0.0});
  for (int n = cfg.first_mode(); n <= cfg.N; ++n) {
    cplx sum = 0.0;
    for (int i = 0; i < arc.size(); ++i) {
      sum += w(n, i) * values[i];
    }
    c[n] = mode_scale(n, cfg.R) * sum;
  }
  return c;
}

TbcMatrix tbc_matrix(const BoundaryArc &arc, const DtnConfig &cfg)
{
  const int M = arc.size();
  const Eigen::MatrixXd w = basis_weights(arc, cfg);
  TbcMatrix out;
  out.nodes = arc.nodes;
  out.pol = cfg.pol;
  out.F = Eigen::MatrixXcd::Zero(M, M);
  for (int n = cfg.first_mode(); n <= cfg.N; ++n) {
    const cplx alpha = mode_scale(n, cfg.R) * cfg.coefficients[n];
    for (int j = 0; j < M; ++j) {
      const double wj = w(n, j);
      if (wj == 0.0) {
        continue;
      }
      for (int i = j; i < M; ++i) {
        out.F(j, i) += alpha * (wj * w(n, i));
      }
    }
  }
  // Mirror so that F(i, j) == F(j, i) holds bit for bit.
  for (int j = 0; j < M; ++j) {
    for (int i = j + 1; i < M; ++i) {
      out.F(i, j) = out.F(j, i);
    }
  }
  return out;
}

std::vector<cplx> tbc_mode_factors(const DtnConfig &cfg)
{
  std::vector<cplx> a(cfg.N + 1, cplx{0.0, 0.0});
  for (int n = cfg.first_mode(); n <= cfg.N; ++n) {
    a[n] = mode_scale(n, cfg.R) * cfg.coefficients[n];
  }
  return a;
}

cplx dtn_evaluate(std::span<const cplx> trace_coefficients, const DtnConfig &cfg, double phi)
{
  cplx sum = 0.0;
  for (int n = cfg.first_mode(); n <= cfg.N; ++n) {
    sum += cfg.coefficients[n] * trace_coefficients[n] * cfg.basis(n, phi);
  }
  return sum;
}

std::vector<cplx> dtn_apply_trace(const BoundaryArc &arc, std::span<const cplx> values,
                                  const DtnConfig &cfg)
{
  const auto c = trace_fourier_coefficients(arc, values, cfg);
  std::vector<cplx> out(arc.size());
  for (int i = 0; i < arc.size(); ++i) {
    out[i] = dtn_evaluate(c, cfg, arc.phi[i]);
  }
  return out;
}

}  // namespace cavity
