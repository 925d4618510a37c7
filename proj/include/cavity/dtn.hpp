// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_DTN_HPP
#define CAVITY_DTN_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavity/common.hpp"
#include "cavity/geometry.hpp"

namespace cavity
{

//
// Truncated Dirichlet-to-Neumann operator on the semicircle |x| = R. TM uses the sine
// modes n = 1..N, TE the cosine modes n = 0..N.
//
struct DtnConfig
{
  Polarization pol = Polarization::TM;
  double kappa0 = 0.0;
  double R = 0.0;
  double R_hat = 0.0;
  int N = 0;
  // kappa0 H_n'(kappa0 R) / H_n(kappa0 R) for n = 0..N.
  std::vector<cplx> coefficients;

  // Throws PreconditionError unless 1 <= N <= 1024, N > e kappa0 R / 2 and 0 <= R_hat < R.
  static DtnConfig make(Polarization pol, double kappa0, double R, double R_hat, int N);

  int first_mode() const { return pol == Polarization::TM ? 1 : 0; }
  // Angular basis function of mode n.
  double basis(int n, double phi) const
  {
    return pol == Polarization::TM ? std::sin(n * phi) : std::cos(n * phi);
  }
};

// Fourier coefficients of the piecewise-linear trace, index n = 0..N (entry 0 is zero for
// TM). The trace is reconstructed as sum_n c_n basis(n, phi).
std::vector<cplx> trace_fourier_coefficients(const BoundaryArc &arc,
                                             std::span<const cplx> values,
                                             const DtnConfig &cfg);

// Weights w(n, i) = integral over the arc polygon of the interpolated basis(n) times the hat
// function of node i. Rows n = 0..N, columns follow arc order.
Eigen::MatrixXd basis_weights(const BoundaryArc &arc, const DtnConfig &cfg);

struct TbcMatrix
{
  std::vector<int> nodes;  // mesh node ids in arc order
  Eigen::MatrixXcd F;      // F(j, i) couples test node j with trial node i
  Polarization pol = Polarization::TM;
};

TbcMatrix tbc_matrix(const BoundaryArc &arc, const DtnConfig &cfg);

// Diagonal of the low-rank form F = W^T diag(a) W with W = basis_weights: a_n is the mode
// normalisation (2 - delta_n0) / (pi R) times the DtN coefficient, zero below first_mode().
std::vector<cplx> tbc_mode_factors(const DtnConfig &cfg);

// B^N applied to the trace, sampled at the arc nodes.
std::vector<cplx> dtn_apply_trace(const BoundaryArc &arc, std::span<const cplx> values,
                                  const DtnConfig &cfg);

// B^N of a trace given by its Fourier coefficients, at an arbitrary angle.
cplx dtn_evaluate(std::span<const cplx> trace_coefficients, const DtnConfig &cfg, double phi);

}  // namespace cavity

#endif  // CAVITY_DTN_HPP
