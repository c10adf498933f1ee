// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_PRECOND_HPP
#define NOSAS_PRECOND_HPP

#include <memory>
#include <vector>

#include "nosas/densela.hpp"
#include "nosas/spectra.hpp"
#include "nosas/substructure.hpp"
#include "nosas/types.hpp"

namespace nosas
{

//
// B_P = C - sum_j U_j V_j on the coarse space. C collects the block-diagonal C0 pieces plus
// the imaginary part (Im B0 for P1/P2, C_Diag for P3/P4); the low-rank pairs carry the
// spectral corrections. Inverse applied with a sparse LU of C and the Woodbury identity.
//
struct CorePlusLowRank
{
  PrecondKind kind = PrecondKind::P4;
  ComplexSparse C;
  std::vector<LowRankPair> pairs;
  std::shared_ptr<const WoodburyOperator> woodbury;

  Index rank() const { return woodbury ? woodbury->rank() : 0; }
  ComplexVector apply_inverse(const ComplexVector &r0) const { return woodbury->apply(r0); }
  ComplexVector apply(const ComplexVector &u0) const;  // B_P u0 without forming B_P
  ComplexMatrix dense() const;                         // small problems only
};

CorePlusLowRank build_bp(const Substructure &sub, const std::vector<SubdomainSpectra> &spectra,
                         PrecondKind kind);

// Local matrix of b_P on subdomain i, written in projection form.
ComplexMatrix local_bp_projection_form(const SubdomainData &d, const SubdomainSpectra &sp,
                                       PrecondKind kind);

// Sum over subdomains of the projection-form local matrices, dense. Oracle for build_bp.
ComplexMatrix reference_bp_dense(const Substructure &sub,
                                 const std::vector<SubdomainSpectra> &spectra, PrecondKind kind);

// Group id per coarse row: one per global edge segment, cross point, or alpha block.
std::vector<long> coarse_groups(const Substructure &sub);

// Nonzeros of C that couple two different groups. For P1/P2, couplings between two outer
// boundary nodes are allowed (the Im B0 block).
Index core_block_violations(const Substructure &sub, const ComplexSparse &C, PrecondKind kind);

class Preconditioner
{
public:
  Preconditioner(const Substructure &sub, std::vector<SubdomainSpectra> spectra,
                 PrecondKind kind);

  PrecondKind kind() const { return kind_; }
  const CorePlusLowRank &bp() const { return bp_; }
  const std::vector<SubdomainSpectra> &spectra() const { return spectra_; }

  // B_P^{-1} r0 (B0^{-1} r0 for the exact kind).
  ComplexVector apply_coarse_inverse(const ComplexVector &r0) const;

  // R0^T B_P^{-1} R0 v + sum R_i^T B_L R_i v on fine vectors. Validation path only.
  ComplexVector apply_full(const ComplexVector &v) const;

private:
  const Substructure *sub_;
  PrecondKind kind_;
  std::vector<SubdomainSpectra> spectra_;
  CorePlusLowRank bp_;
  CoreSolve exact_;
};

}  // namespace nosas

#endif  // NOSAS_PRECOND_HPP
