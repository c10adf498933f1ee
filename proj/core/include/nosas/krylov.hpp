// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_KRYLOV_HPP
#define NOSAS_KRYLOV_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include "nosas/types.hpp"

namespace nosas
{

using LinearOperator = std::function<ComplexVector(const ComplexVector &)>;

struct GmresReport
{
  int iterations = 0;
  bool converged = false;
  // Preconditioned relative residual: entry 0 is 1, entry j is after j Arnoldi steps.
  std::vector<double> relative_residuals;
  double final_relative_residual = 0.0;  // recomputed explicitly from the solution
  double orthogonality_loss = 0.0;       // max |V^H V - I| over the Krylov basis
  ComplexVector solution;
};

//
// Full left-preconditioned GMRES from a zero initial guess. Stops when
// ||M^{-1}(b - A x)|| <= tol ||M^{-1} b||. Modified Gram-Schmidt with one extra pass when
// the new vector shrinks noticeably; Givens rotations for the least-squares problem.
//
GmresReport gmres(const LinearOperator &apply_A, const LinearOperator &apply_Minv,
                  const ComplexVector &rhs, double tol, int max_it);

// "iteration,relative_residual" rows.
void write_residual_history_csv(const GmresReport &report, std::ostream &out);

}  // namespace nosas

#endif  // NOSAS_KRYLOV_HPP
