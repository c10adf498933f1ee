// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_DENSELA_HPP
#define NOSAS_DENSELA_HPP

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/SparseLU>

#include "nosas/types.hpp"

namespace nosas
{

// Lower Cholesky factor L with L*L^T = M. Throws NotSpdError naming the failing pivot.
RealMatrix cholesky(const RealMatrix &M);

//
// Bunch-Kaufman factorization P*K*P^T = L*D*L^T of a complex symmetric (K^T = K, not
// Hermitian) matrix with 1x1 and 2x2 pivot blocks. Used for the bordered interior
// systems, which are indefinite.
//
class SymmetricIndefiniteLdlt
{
public:
  explicit SymmetricIndefiniteLdlt(const ComplexMatrix &K);

  ComplexVector solve(const ComplexVector &rhs) const;
  Index size() const { return static_cast<Index>(perm_.size()); }
  Index num_two_by_two_blocks() const;

private:
  ComplexMatrix factor_;      // unit L below the diagonal, D blocks on/near the diagonal
  std::vector<Index> perm_;   // row i of P*K is row perm_[i] of K
  std::vector<int> block_;    // 1 or 2 at the first index of each pivot block, 0 otherwise
};

ComplexVector ldlt_solve(const ComplexMatrix &K, const ComplexVector &rhs);

// Eigenpairs sorted ascending; columns of `vectors` are the eigenvectors.
struct GenEigResult
{
  RealVector values;
  RealMatrix vectors;
};

// Symmetric eigendecomposition with orthonormal vectors. Each vector is signed so that its
// largest-magnitude entry is positive.
GenEigResult sym_eig(const RealMatrix &S);

// A x = lambda M x with M SPD, reduced through M = L L^T. Vectors are M-orthonormal.
GenEigResult gen_eig_spd(const RealMatrix &A, const RealMatrix &M);

// Applies x -> A^{-1} x for the unperturbed core matrix.
using CoreSolve = std::function<ComplexVector(const ComplexVector &)>;

// Sparse LU (COLAMD ordering) of a square complex matrix, returned as a solve closure.
// Throws SingularMatrixError when the factorization fails.
CoreSolve sparse_lu_solver(const ComplexSparse &A);

struct LowRankPair
{
  ComplexSparse U;  // n x r
  ComplexSparse V;  // r x n
};

//
// Inverse of A - U_1 V_1 - ... - U_p V_p through the Woodbury identity
//
//   (A - U V)^{-1} = A^{-1} + A^{-1} U M^{-1} V A^{-1},   M = I - V A^{-1} U,
//
// with U = [U_1, ..., U_p] and V = [V_1; ...; V_p]. The capacitance matrix M is formed
// explicitly (sparse) and LU-factorized.
//
class WoodburyOperator
{
public:
  WoodburyOperator(CoreSolve core, std::vector<LowRankPair> pairs);

  ComplexVector apply(const ComplexVector &x) const;

  Index rank() const { return rank_; }
  Index size() const { return n_; }
  const std::vector<LowRankPair> &pairs() const { return pairs_; }
  const ComplexSparse &capacitance() const { return capacitance_; }

private:
  CoreSolve core_;
  std::vector<LowRankPair> pairs_;
  ComplexSparse U_, V_;
  ComplexSparse capacitance_;
  std::shared_ptr<Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>>> capacitance_lu_;
  Index n_ = 0;
  Index rank_ = 0;
};

WoodburyOperator woodbury_build(CoreSolve core, const ComplexMatrix &U1, const ComplexMatrix &V1,
                                const ComplexMatrix &U2, const ComplexMatrix &V2);

}  // namespace nosas

#endif  // NOSAS_DENSELA_HPP
