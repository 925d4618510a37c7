// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_SPECFUN_HPP
#define CAVITY_SPECFUN_HPP

#include <vector>

#include "cavity/common.hpp"

namespace cavity::specfun
{

// Hard cap on the integer order accepted by every routine in this header.
inline constexpr int kMaxOrder = 1024;

// Bessel function of the first kind J_n(z) for integer n >= 0 and real z > 0.
double bessel_j(int n, double z);

// Bessel function of the second kind Y_n(z) for integer n >= 0 and real z > 0. Returns
// -inf once the value overflows (large n, small z).
double bessel_y(int n, double z);

// J_0(z) .. J_nmax(z) from a single backward recurrence.
std::vector<double> bessel_j_sequence(int n_max, double z);

// Y_0(z) .. Y_nmax(z) from a single forward recurrence.
std::vector<double> bessel_y_sequence(int n_max, double z);

//
// Hankel functions H_n^{(1)} = J_n + i Y_n and their derivatives at a fixed real argument,
// orders 0..order_max. Immutable once built.
//
struct HankelTable
{
  int order_max = 0;
  double argument = 0.0;
  std::vector<cplx> h;
  std::vector<cplx> hp;
};

// Throws NumericalError if Y_n overflows for some n <= order_max + 1.
HankelTable hankel_table(int order_max, double z);

// DtN coefficient kappa0 H_n'(kappa0 R) / H_n(kappa0 R). Evaluated through the ratio
// H_{n-1}/H_n, so it stays finite even where H_n itself overflows.
cplx dtn_coefficient(int n, double kappa0, double R);

// Coefficients for n = 0..n_max in one pass.
std::vector<cplx> dtn_coefficients(int n_max, double kappa0, double R);

// 1 / H_n^{(1)}(z) for n = 0..n_max, built from products of ratios (no overflow).
std::vector<cplx> inverse_hankel(int n_max, double z);

}  // namespace cavity::specfun

#endif  // CAVITY_SPECFUN_HPP
