// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_LINSOLVE_HPP
#define CAVITY_LINSOLVE_HPP

#include <memory>

#include "cavity/assembly.hpp"

namespace cavity
{

// Zero pivot met during numerical factorization.
struct SingularMatrixError : NumericalError
{
  SingularMatrixError(const std::string &what, int index) : NumericalError(what), index(index) {}
  int index;  // equation (column) index of the offending pivot
};

// Empty row or column; no pivot order can make the matrix nonsingular.
struct StructurallySingularError : NumericalError
{
  using NumericalError::NumericalError;
};

//
// Sparse LU factorization (approximate minimum degree ordering, partial pivoting) of a
// square complex matrix. Immutable after construction; solve() may be called concurrently.
//
class Factorization
{
public:
  explicit Factorization(const SparseMatrix &A);
  ~Factorization();
  Factorization(Factorization &&) noexcept;
  Factorization &operator=(Factorization &&) noexcept;
  Factorization(const Factorization &) = delete;
  Factorization &operator=(const Factorization &) = delete;

  int dimension() const;
  // Reciprocal condition estimate reported by the factorization.
  double rcond() const;

  // Solve with one step of iterative refinement (a second one when the relative residual
  // is still above 1e-10). Throws NumericalError if the residual target is missed.
  Vector solve(const Vector &b) const;
  // Relative residual of the most recent solve on this thread.
  static double last_residual();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

inline Factorization factor(const SparseMatrix &A) { return Factorization(A); }
inline Vector solve(const Factorization &f, const Vector &b) { return f.solve(b); }

// Solves A x = rhs of a global system through its sparse bordered form, then refines
// against A itself until the relative residual is at most 1e-10 (NumericalError otherwise).
Vector solve_system(const GlobalSystem &system);

}  // namespace cavity

#endif  // CAVITY_LINSOLVE_HPP
