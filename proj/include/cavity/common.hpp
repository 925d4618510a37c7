// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_COMMON_HPP
#define CAVITY_COMMON_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cavity
{

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Plain 2-D point/vector.
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class Polarization
{
  TM,
  TE
};

inline const char *to_string(Polarization p) { return p == Polarization::TM ? "TM" : "TE"; }

// Error hierarchy. Every module throws one of these; the CLI maps them onto exit codes.
struct Error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
struct DomainError : Error
{
  using Error::Error;
};

// Overflow, underflow, non-convergence, singular systems.
struct NumericalError : Error
{
  using Error::Error;
};

// Invalid or self-intersecting geometry, failed meshing.
struct GeometryError : Error
{
  using Error::Error;
};

// Violated precondition of a library call.
struct PreconditionError : Error
{
  using Error::Error;
};

// Malformed or inconsistent run configuration.
struct ConfigError : Error
{
  using Error::Error;
};

}  // namespace cavity

#endif  // CAVITY_COMMON_HPP
