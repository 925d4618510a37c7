// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cavity::specfun
{

namespace
{

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kRescaleAbove = 1e250;

void check_arguments(int n, double z, const char *who)
{
  if (n < 0 || n > kMaxOrder) {
    std::ostringstream msg;
    msg << who << ": order " << n << " outside [0, " << kMaxOrder << "]";
    throw DomainError(msg.str());
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << who << ": argument " << z << " must be finite and positive";
    throw DomainError(msg.str());
  }
}

// Ascending power series; used for small arguments where every term shrinks.
double j_series(int n, double z)
{
  const double half = 0.5 * z;
  const double lead_log = n * std::log(half) - std::lgamma(n + 1.0);
  if (lead_log < -745.0) {
    return 0.0;
  }
  const double q = -half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      break;
    }
  }
  return std::exp(lead_log) * sum;
}

struct MillerResult
{
  std::vector<double> j;
  double y0 = 0.0;
  double y1 = 0.0;
};

// Backward recurrence started well above max(n_max, z), normalised with
// J_0 + 2 sum J_2k = 1. The same sweep accumulates the Neumann series that give Y_0, Y_1.
MillerResult miller(int n_max, double z)
{
  const double top = std::max(static_cast<double>(n_max), z);
  int m = static_cast<int>(top) + 30 + static_cast<int>(3.0 * std::sqrt(top));
  m += m % 2;

  std::vector<double> f(m + 2, 0.0);
  double even_sum = 0.0;  // 2 sum_{k>=1} F_{2k}
  double su = 0.0;        // sum (-1)^k F_{2k} / k
  double sv = 0.0;        // sum over odd k of (-1)^{(k-1)/2} k/(k^2-1) F_k
  double f2 = 0.0;
  double f1 = 1e-100;
  for (int k = m; k >= 0; --k) {
    const double fk = 2.0 * (k + 1) / z * f1 - f2;
    f[k] = fk;
    if (k % 2 == 0 && k != 0) {
      even_sum += 2.0 * fk;
      su += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * fk / k;
    } else if (k > 1) {
      sv += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * k / (static_cast<double>(k) * k - 1.0) * fk;
    }
    f2 = f1;
    f1 = fk;
    if (std::abs(fk) > kRescaleAbove) {
      const double s = 1.0 / kRescaleAbove;
      for (int i = k; i <= m; ++i) {
        f[i] *= s;
      }
      f1 *= s;
      f2 *= s;
      even_sum *= s;
      su *= s;
      sv *= s;
    }
  }

  const double s0 = even_sum + f[0];
  MillerResult out;
  out.j.resize(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    out.j[k] = f[k] / s0;
  }
  const double j0 = f[0] / s0;
  const double j1 = f[1] / s0;
  const double ec = std::log(0.5 * z) + kEulerGamma;
  out.y0 = (2.0 / kPi) * (ec * j0 - 4.0 * su / s0);
  out.y1 = (2.0 / kPi) * ((ec - 1.0) * j1 - j0 / z - 4.0 * sv / s0);
  return out;
}

}  // namespace

std::vector<double> bessel_j_sequence(int n_max, double z)
{
  check_arguments(n_max, z, "bessel_j");
  if (z <= 1.0) {
    std::vector<double> j(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
      j[n] = j_series(n, z);
    }
    return j;
  }
  return miller(n_max, z).j;
}

std::vector<double> bessel_y_sequence(int n_max, double z)
{
  check_arguments(n_max, z, "bessel_y");
  const MillerResult mr = miller(1, z);
  std::vector<double> y(n_max + 1);
  y[0] = mr.y0;
  if (n_max >= 1) {
    y[1] = mr.y1;
  }
  for (int n = 1; n < n_max; ++n) {
    if (!std::isfinite(y[n])) {
      y[n + 1] = y[n];
      continue;
    }
    y[n + 1] = 2.0 * n / z * y[n] - y[n - 1];
  }
  return y;
}

double bessel_j(int n, double z)
{
  check_arguments(n, z, "bessel_j");
  if (z <= 1.0) {
    return j_series(n, z);
  }
  return miller(n, z).j[n];
}

double bessel_y(int n, double z) { return bessel_y_sequence(n, z).back(); }

HankelTable hankel_table(int order_max, double z)
{
  check_arguments(order_max, z, "hankel_table");
  if (order_max + 1 > kMaxOrder) {
    throw DomainError("hankel_table: order_max + 1 exceeds the order cap");
  }
  const auto j = bessel_j_sequence(order_max + 1, z);
  const auto y = bessel_y_sequence(order_max + 1, z);
  HankelTable t;
  t.order_max = order_max;
  t.argument = z;
  t.h.resize(order_max + 2);
  for (int n = 0; n <= order_max + 1; ++n) {
    if (!std::isfinite(y[n])) {
      std::ostringstream msg;
      msg << "hankel_table: Y_" << n << "(" << z << ") overflows";
      throw NumericalError(msg.str());
    }
    t.h[n] = {j[n], y[n]};
  }
  t.hp.resize(order_max + 1);
  t.hp[0] = -t.h[1];
  for (int n = 1; n <= order_max; ++n) {
    t.hp[n] = t.h[n - 1] - (n / z) * t.h[n];
  }
  t.h.pop_back();
  return t;
}

namespace
{

// ratio[n] = H_{n-1}(z) / H_n(z) for n = 1..n_max (ratio[0] unused).
std::vector<cplx> hankel_ratios(int n_max, double z)
{
  const auto j = bessel_j_sequence(1, z);
  const auto y = bessel_y_sequence(1, z);
  const cplx h0{j[0], y[0]};
  const cplx h1{j[1], y[1]};
  std::vector<cplx> ratio(std::max(n_max, 1) + 1);
  ratio[1] = h0 / h1;
  for (int n = 1; n < n_max; ++n) {
    // H_{n+1}/H_n = 2n/z - H_{n-1}/H_n
    ratio[n + 1] = 1.0 / (2.0 * n / z - ratio[n]);
  }
  return ratio;
}

}  // namespace

std::vector<cplx> dtn_coefficients(int n_max, double kappa0, double R)
{
  const double z = kappa0 * R;
  check_arguments(n_max, z, "dtn_coefficient");
  const auto ratio = hankel_ratios(n_max, z);
  std::vector<cplx> c(n_max + 1);
  c[0] = -kappa0 / ratio[1];
  for (int n = 1; n <= n_max; ++n) {
    c[n] = kappa0 * (ratio[n] - static_cast<double>(n) / z);
  }
  for (int n = 0; n <= n_max; ++n) {
    if (!std::isfinite(c[n].real()) || !std::isfinite(c[n].imag())) {
      std::ostringstream msg;
      msg << "dtn_coefficient: non-finite value at order " << n << ", argument " << z;
      throw NumericalError(msg.str());
    }
  }
  return c;
}

cplx dtn_coefficient(int n, double kappa0, double R)
{
  return dtn_coefficients(n, kappa0, R)[n];
}

std::vector<cplx> inverse_hankel(int n_max, double z)
{
  check_arguments(n_max, z, "inverse_hankel");
  const auto j = bessel_j_sequence(0, z);
  const auto y = bessel_y_sequence(0, z);
  const auto ratio = hankel_ratios(n_max, z);
  std::vector<cplx> inv(n_max + 1);
  inv[0] = 1.0 / cplx{j[0], y[0]};
  for (int n = 1; n <= n_max; ++n) {
    inv[n] = inv[n - 1] * ratio[n];
  }
  return inv;
}

}  // namespace cavity::specfun
