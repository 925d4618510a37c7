// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/linsolve.hpp"

#include <umfpack.h>

#include <sstream>
#include <vector>

namespace cavity
{

namespace
{

using Long = SuiteSparse_long;

thread_local double g_last_residual = 0.0;

std::string status_text(Long status)
{
  switch (status) {
    case UMFPACK_ERROR_out_of_memory:
      return "out of memory";
    case UMFPACK_ERROR_invalid_matrix:
      return "invalid matrix";
    case UMFPACK_ERROR_different_pattern:
      return "pattern changed";
    default:
      return "status " + std::to_string(status);
  }
}

}  // namespace

struct Factorization::Impl
{
  SparseMatrix A;
  std::vector<Long> Ap;
  std::vector<Long> Ai;
  void *numeric = nullptr;
  double rcond = 0.0;

  ~Impl()
  {
    if (numeric != nullptr) {
      umfpack_zl_free_numeric(&numeric);
    }
  }

  const double *values() const { return reinterpret_cast<const double *>(A.valuePtr()); }
};

Factorization::Factorization(const SparseMatrix &A) : impl_(std::make_unique<Impl>())
{
  if (A.rows() != A.cols()) {
    throw PreconditionError("factor: matrix is not square");
  }
  const Long n = A.rows();
  impl_->A = A;
  impl_->A.makeCompressed();
  SparseMatrix &M = impl_->A;
  if (n == 0) {
    return;
  }

  // An empty row or column can never be pivoted.
  std::vector<char> row_hit(n, 0);
  for (Long c = 0; c < n; ++c) {
    bool any = false;
    for (SparseMatrix::InnerIterator it(M, c); it; ++it) {
      if (it.value() != cplx{0.0, 0.0}) {
        any = true;
        row_hit[it.row()] = 1;
      }
    }
    if (!any) {
      throw StructurallySingularError("factor: structurally singular, column " +
                                      std::to_string(c) + " is empty");
    }
  }
  for (Long r = 0; r < n; ++r) {
    if (!row_hit[r]) {
      throw StructurallySingularError("factor: structurally singular, row " + std::to_string(r) +
                                      " is empty");
    }
  }

  impl_->Ap.assign(M.outerIndexPtr(), M.outerIndexPtr() + n + 1);
  impl_->Ai.assign(M.innerIndexPtr(), M.innerIndexPtr() + M.nonZeros());

  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_zl_defaults(control);
  control[UMFPACK_ORDERING] = UMFPACK_ORDERING_AMD;
  control[UMFPACK_IRSTEP] = 0;

  void *symbolic = nullptr;
  Long status = umfpack_zl_symbolic(n, n, impl_->Ap.data(), impl_->Ai.data(), impl_->values(),
                                    nullptr, &symbolic, control, info);
  if (status != UMFPACK_OK) {
    if (symbolic != nullptr) {
      umfpack_zl_free_symbolic(&symbolic);
    }
    throw NumericalError("factor: symbolic analysis failed (" + status_text(status) + ")");
  }
  status = umfpack_zl_numeric(impl_->Ap.data(), impl_->Ai.data(), impl_->values(), nullptr,
                              symbolic, &impl_->numeric, control, info);
  umfpack_zl_free_symbolic(&symbolic);
  impl_->rcond = info[UMFPACK_RCOND];
  if (status == UMFPACK_WARNING_singular_matrix) {
    // Locate the first zero pivot and map it back to the original column.
    std::vector<Long> Q(n);
    std::vector<double> D(2 * n);
    Long do_recip = 0;
    int index = -1;
    if (umfpack_zl_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                               nullptr, nullptr, Q.data(), D.data(), nullptr, &do_recip,
                               nullptr, impl_->numeric) == UMFPACK_OK) {
      for (Long k = 0; k < n; ++k) {
        if (D[2 * k] == 0.0 && D[2 * k + 1] == 0.0) {
          index = static_cast<int>(Q[k]);
          break;
        }
      }
    }
    throw SingularMatrixError("factor: singular pivot at equation " + std::to_string(index),
                              index);
  }
  if (status != UMFPACK_OK) {
    throw NumericalError("factor: numeric factorization failed (" + status_text(status) + ")");
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization &&) noexcept = default;
Factorization &Factorization::operator=(Factorization &&) noexcept = default;

int Factorization::dimension() const { return static_cast<int>(impl_->A.rows()); }

double Factorization::rcond() const { return impl_->rcond; }

double Factorization::last_residual() { return g_last_residual; }

Vector Factorization::solve(const Vector &b) const
{
  const Long n = impl_->A.rows();
  if (b.size() != n) {
    throw PreconditionError("solve: right-hand side has the wrong length");
  }
  const double bnorm = b.norm();
  if (n == 0 || bnorm == 0.0) {
    g_last_residual = 0.0;
    return Vector::Zero(n);
  }

  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_zl_defaults(control);
  control[UMFPACK_IRSTEP] = 0;

  auto raw_solve = [&](const Vector &rhs) {
    Vector x(n);
    const Long status = umfpack_zl_solve(
      UMFPACK_A, impl_->Ap.data(), impl_->Ai.data(), impl_->values(), nullptr,
      reinterpret_cast<double *>(x.data()), nullptr, reinterpret_cast<const double *>(rhs.data()),
      nullptr, impl_->numeric, control, info);
    if (status != UMFPACK_OK) {
      throw NumericalError("solve: back substitution failed (" + status_text(status) + ")");
    }
    return x;
  };

  Vector x = raw_solve(b);
  double res = 0.0;
  for (int step = 0; step < 2; ++step) {
    const Vector r = b - impl_->A * x;
    x += raw_solve(r);
    res = (b - impl_->A * x).norm() / bnorm;
    if (res <= 1e-10) {
      break;
    }
  }
  g_last_residual = res;
  if (!(res <= 1e-10)) {
    std::ostringstream msg;
    msg << "solve: relative residual " << res << " above 1e-10 after iterative refinement";
    throw NumericalError(msg.str());
  }
  return x;
}

Vector solve_system(const GlobalSystem &system)
{
  const int n = system.dimension();
  const Factorization lu(system.bordered());
  const int m = lu.dimension() - n;
  const double bnorm = system.rhs.norm();
  if (bnorm == 0.0) {
    g_last_residual = 0.0;
    return Vector::Zero(n);
  }
  auto bordered_solve = [&](const Vector &r) {
    Vector ext = Vector::Zero(n + m);
    ext.head(n) = r;
    return Vector(lu.solve(ext).head(n));
  };
  Vector x = bordered_solve(system.rhs);
  double res = (system.rhs - system.apply(x)).norm() / bnorm;
  for (int step = 0; step < 2 && res > 1e-10; ++step) {
    x += bordered_solve(system.rhs - system.apply(x));
    res = (system.rhs - system.apply(x)).norm() / bnorm;
  }
  g_last_residual = res;
  if (!(res <= 1e-10)) {
    std::ostringstream msg;
    msg << "solve: relative residual " << res << " above 1e-10 after iterative refinement";
    throw NumericalError(msg.str());
  }
  return x;
}

}  // namespace cavity
