// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_SUBSTRUCTURE_HPP
#define NOSAS_SUBSTRUCTURE_HPP

#include <atomic>
#include <memory>
#include <vector>

#include "nosas/assemble.hpp"
#include "nosas/densela.hpp"
#include "nosas/mesh.hpp"
#include "nosas/types.hpp"

namespace nosas
{

// Interior eigenpairs of B_II phi = mu H_II phi split at |mu| < beta.
struct ModeSplit
{
  double beta = 0.0;
  RealVector mu;      // all eigenvalues, ascending
  RealMatrix Q_S;     // small modes, |mu| < beta
  RealMatrix Q_L;     // the rest
  RealVector mu_S;
  RealVector mu_L;

  Index num_small() const { return Q_S.cols(); }
};

ModeSplit interior_modes(const LocalOperators &local, double beta);

// B_L = Q_L diag(1/mu_L) Q_L^T and H_L = Q_L Q_L^T.
RealMatrix mode_inverse_B(const ModeSplit &split);
RealMatrix mode_inverse_H(const ModeSplit &split);

// Real matrix times complex vector without promoting the matrix.
ComplexVector real_times(const RealMatrix &A, const ComplexVector &x);

// u = B_L rhs: the solution in Range(Q_L) of Q_L^T (B_II u - rhs) = 0.
ComplexVector local_solve_modes(const ModeSplit &split, const ComplexVector &rhs);

// Same solution via the bordered system [[B_II, H_II Q_S], [Q_S^T H_II, 0]].
ComplexVector local_solve_saddle(const LocalOperators &local, const ModeSplit &split,
                                 const ComplexVector &rhs);

// B_gg - B_gI B_L B_Ig and H_gg - H_gI H_L H_Ig.
ComplexMatrix schur_hat_B(const LocalOperators &local, const ModeSplit &split);
RealMatrix schur_hat_H(const LocalOperators &local, const ModeSplit &split);

struct SubdomainData
{
  LocalOperators local;
  ModeSplit split;
  RealMatrix B_L;
  RealMatrix H_L;
  ComplexMatrix B_hat;
  RealMatrix H_hat;
  ComplexMatrix B0;  // local coarse block, (Gamma_i, alpha_i) ordering
  RealMatrix H0;
  std::vector<Index> coarse_index;  // local coarse row -> row of the global coarse vector

  Index num_gamma() const { return local.num_gamma(); }
  Index num_small() const { return split.num_small(); }
  Index coarse_size() const { return static_cast<Index>(coarse_index.size()); }
};

//
// Everything the coarse level needs: per-subdomain operators, mode splits, the assembled
// coarse matrix B0 on V0 = Gamma + alpha slots (Gamma first, then alpha blocks by subdomain),
// and the actions of R0^T and R0. Calls to the interior solve B_L are counted.
//
class Substructure
{
public:
  Substructure(Mesh mesh, Decomposition dec, double k, double beta);

  const Mesh &mesh() const { return mesh_; }
  const Decomposition &decomposition() const { return dec_; }
  double k() const { return k_; }
  double beta() const { return beta_; }
  int num_subdomains() const { return dec_.num_subdomains(); }
  const SubdomainData &subdomain(int i) const { return subs_[i]; }

  Index num_gamma() const { return dec_.num_gamma(); }
  Index coarse_dim() const { return coarse_dim_; }
  Index alpha_offset(int i) const { return alpha_offset_[i]; }
  const ComplexSparse &B0() const { return B0_; }
  RealSparse H0_assembled() const;

  // Restrictions between fine (Gamma, I) vectors and local pieces.
  ComplexVector gather_gamma(int i, const ComplexVector &fine_or_coarse) const;
  ComplexVector gather_interior(int i, const ComplexVector &fine) const;
  ComplexVector gather_coarse(int i, const ComplexVector &coarse) const;
  void scatter_coarse_add(int i, const ComplexVector &local, ComplexVector &coarse) const;

  // Counted application of B_L on subdomain i.
  ComplexVector local_solve(int i, const ComplexVector &rhs_I) const;
  std::size_t local_solve_count() const { return counter_->load(); }
  void reset_local_solve_count() const { counter_->store(0); }

  ComplexVector apply_R0T(const ComplexVector &u0) const;
  ComplexVector apply_R0(const ComplexVector &v) const;

  // Minimum H-energy extension of u0 (interior -H_L H_Ig u_Gamma + Q_S alpha).
  ComplexVector apply_H0T(const ComplexVector &u0) const;

  struct Decomposed
  {
    ComplexVector v0;
    std::vector<ComplexVector> v_i;  // interior pieces, in Range(Q_L)
  };
  Decomposed decompose(const ComplexVector &v) const;
  ComplexVector recompose(const Decomposed &parts) const;

  // B^{-1} l = R0^T B0^{-1} R0 l + sum R_i^T B_L R_i l, with a sparse LU of B0.
  ComplexVector exact_solve(const ComplexVector &l) const;

private:
  Mesh mesh_;
  Decomposition dec_;
  double k_;
  double beta_;
  std::vector<SubdomainData> subs_;
  std::vector<Index> alpha_offset_;
  Index coarse_dim_ = 0;
  ComplexSparse B0_;
  std::shared_ptr<std::atomic<std::size_t>> counter_;
  mutable CoreSolve B0_solver_;
};

}  // namespace nosas

#endif  // NOSAS_SUBSTRUCTURE_HPP
