// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "nosas/assemble.hpp"
#include "nosas/densela.hpp"
#include "nosas/substructure.hpp"
#include "oracles.hpp"

using namespace nosas;
using nosas::oracle::max_abs;
using nosas::oracle::random_complex;

namespace
{

Substructure make(int inv_h, int inv_H, double k, double beta)
{
  Mesh m = build_mesh(inv_h);
  Decomposition d = build_decomposition(m, inv_H);
  return Substructure(std::move(m), std::move(d), k, beta);
}

// A fine vector supported on the interior of subdomain i.
ComplexVector inject_interior(const Substructure &s, int i, const ComplexVector &xi)
{
  const Decomposition &d = s.decomposition();
  ComplexVector v = ComplexVector::Zero(d.num_dofs());
  for (Index p = 0; p < xi.size(); ++p) v(d.interior_slot(d.subdomains[i], p)) = xi(p);
  return v;
}

}  // namespace

TEST(InteriorModes, NoSmallModesAtLowWavenumber)
{
  const Substructure s = make(16, 4, 1.0, 0.01);
  for (int i = 0; i < s.num_subdomains(); ++i)
  {
    EXPECT_EQ(s.subdomain(i).num_small(), 0);
    EXPECT_GE(s.subdomain(i).split.mu.cwiseAbs().minCoeff(), 0.01);
  }
  EXPECT_EQ(s.coarse_dim(), s.num_gamma());
}

TEST(InteriorModes, BoundedByOneAndSplitStrictly)
{
  const Substructure s = make(16, 2, 20.0, 0.3);
  Index small = 0;
  for (int i = 0; i < s.num_subdomains(); ++i)
  {
    const ModeSplit &sp = s.subdomain(i).split;
    EXPECT_LE(sp.mu.maxCoeff(), 1.0 + 1e-12);
    for (Index j = 0; j < sp.mu_S.size(); ++j) EXPECT_LT(std::abs(sp.mu_S(j)), 0.3);
    for (Index j = 0; j < sp.mu_L.size(); ++j) EXPECT_GE(std::abs(sp.mu_L(j)), 0.3);
    EXPECT_EQ(sp.mu_S.size() + sp.mu_L.size(), sp.mu.size());
    small += sp.num_small();
  }
  EXPECT_GT(small, 0);
}

TEST(InteriorModes, RejectsBadBeta)
{
  EXPECT_THROW(make(8, 2, 5.0, 0.0), ConfigError);
  EXPECT_THROW(make(8, 2, 5.0, 1.0), ConfigError);
  EXPECT_THROW(make(8, 2, 0.0, 0.01), ConfigError);
}

TEST(LocalSolve, EigenvectorRhs)
{
  const Substructure s = make(16, 2, 20.0, 0.3);
  const SubdomainData &d = s.subdomain(0);
  const RealMatrix &Q = d.split.Q_L;
  const ComplexVector phi = Q.col(Q.cols() / 2).cast<Complex>();
  const ComplexVector rhs = real_times(d.local.B_II, phi);
  EXPECT_LE((local_solve_modes(d.split, rhs) - phi).norm(), 1e-10 * phi.norm());
}

TEST(LocalSolve, UnconstrainedIsPlainInverse)
{
  const Substructure s = make(16, 4, 1.0, 0.01);
  const SubdomainData &d = s.subdomain(3);
  const ComplexVector rhs = random_complex(d.local.num_interior(), 4);
  const ComplexVector ref = d.local.B_II.cast<Complex>().partialPivLu().solve(rhs);
  EXPECT_LE((local_solve_modes(d.split, rhs) - ref).norm(), 1e-10 * ref.norm());
}

TEST(LocalSolve, ModeAndSaddlePathsAgree)
{
  for (double beta : {0.01, 0.3})
  {
    const Substructure s = make(16, 2, 20.0, beta);
    for (int i = 0; i < s.num_subdomains(); ++i)
    {
      const SubdomainData &d = s.subdomain(i);
      const ComplexVector b = random_complex(d.local.num_interior(), 100 + i);
      const ComplexVector a = local_solve_modes(d.split, b);
      EXPECT_LE((a - local_solve_saddle(d.local, d.split, b)).norm(), 1e-9 * a.norm());
    }
  }
}

TEST(LocalSolve, Counted)
{
  const Substructure s = make(8, 2, 5.0, 0.01);
  s.reset_local_solve_count();
  s.local_solve(0, random_complex(s.subdomain(0).local.num_interior(), 1));
  s.apply_R0T(random_complex(s.coarse_dim(), 2));
  EXPECT_EQ(s.local_solve_count(), 1u + s.num_subdomains());
}

TEST(SchurHat, ClassicalWhenNoSmallModes)
{
  const Substructure s = make(16, 4, 1.0, 0.01);
  const SubdomainData &d = s.subdomain(5);
  const LocalOperators &L = d.local;
  const ComplexMatrix ref =
      L.B_gg - L.B_gI.cast<Complex>() * L.B_II.cast<Complex>().partialPivLu().solve(L.B_Ig.cast<Complex>());
  EXPECT_LE(max_abs(ComplexMatrix(schur_hat_B(L, d.split) - ref)), 1e-10 * max_abs(ref));
}

TEST(SchurHat, AllModesSmallLeavesBgg)
{
  const Substructure s = make(8, 2, 10.0, 0.01);
  const SubdomainData &d = s.subdomain(0);
  ModeSplit all = d.split;
  all.Q_S = gen_eig_spd(d.local.B_II, d.local.H_II).vectors;
  all.mu_S = all.mu;
  all.Q_L = RealMatrix::Zero(all.mu.size(), 0);
  all.mu_L = RealVector(0);
  EXPECT_EQ(max_abs(ComplexMatrix(schur_hat_B(d.local, all) - d.local.B_gg)), 0.0);
}

TEST(SchurHat, MatchesBorderedElimination)
{
  for (double beta : {0.01, 0.3})
  {
    const Substructure s = make(8, 2, 10.0, beta);
    for (int i = 0; i < s.num_subdomains(); ++i)
    {
      const SubdomainData &d = s.subdomain(i);
      const ComplexMatrix ref = oracle::bordered_schur(d.local, d.split);
      EXPECT_LE(max_abs(ComplexMatrix(d.B_hat - ref)), 1e-9 * max_abs(ref)) << "beta " << beta;
    }
  }
}

TEST(CoarseMatrix, SymmetricByConstruction)
{
  const Substructure s = make(8, 2, 10.0, 0.3);
  const ComplexMatrix B0(s.B0());
  EXPECT_EQ(max_abs(ComplexMatrix(B0 - B0.transpose())), 0.0);
}

TEST(CoarseMatrix, SchurComplementWithoutSmallModes)
{
  const Substructure s = make(16, 4, 1.0, 0.01);
  const GlobalSystem sys = assemble_global(s.mesh(), s.decomposition(), 1.0);
  const ComplexMatrix B(sys.B);
  const Index ng = s.num_gamma(), ni = B.rows() - ng;
  const ComplexMatrix S = B.topLeftCorner(ng, ng) -
                          B.topRightCorner(ng, ni) * B.bottomRightCorner(ni, ni).partialPivLu().solve(B.bottomLeftCorner(ni, ng));
  ASSERT_EQ(s.coarse_dim(), ng);
  EXPECT_LE(max_abs(ComplexMatrix(ComplexMatrix(s.B0()) - S)), 1e-10 * max_abs(S));
}

TEST(CoarseMatrix, ExactSolverIdentity)
{
  const Substructure s = make(16, 4, 10.0, 0.01);
  const GlobalSystem sys = assemble_global(s.mesh(), s.decomposition(), 10.0);
  const ComplexVector l = random_complex(sys.B.rows(), 77);
  const ComplexVector ref = ComplexMatrix(sys.B).partialPivLu().solve(l);
  EXPECT_LE((s.exact_solve(l) - ref).norm() / ref.norm(), 1e-8);
}

TEST(Extension, ZeroAndUnitAlpha)
{
  const Substructure s = make(16, 2, 20.0, 0.3);
  EXPECT_EQ(s.apply_R0T(ComplexVector::Zero(s.coarse_dim())).norm(), 0.0);
  const int i = 1;
  const SubdomainData &d = s.subdomain(i);
  ASSERT_GT(d.num_small(), 0);
  ComplexVector u0 = ComplexVector::Zero(s.coarse_dim());
  u0(s.alpha_offset(i) + 0) = 1.0;
  const ComplexVector v = s.apply_R0T(u0);
  const ComplexVector ref = inject_interior(s, i, d.split.Q_S.col(0).cast<Complex>());
  EXPECT_LE((v - ref).norm(), 1e-14);
}

TEST(Extension, QuadraticFormMatchesFineForm)
{
  const Substructure s = make(16, 2, 20.0, 0.3);
  const GlobalSystem sys = assemble_global(s.mesh(), s.decomposition(), 20.0);
  for (int t = 0; t < 5; ++t)
  {
    const ComplexVector u0 = random_complex(s.coarse_dim(), 10 + t);
    const ComplexVector v0 = random_complex(s.coarse_dim(), 20 + t);
    const ComplexVector BU = sys.B * s.apply_R0T(u0);
    const Complex fine = s.apply_R0T(v0).dot(BU);
    const Complex coarse = v0.dot(s.B0() * u0);
    EXPECT_LE(std::abs(fine - coarse), 1e-10 * s.apply_R0T(v0).norm() * BU.norm());
  }
}

TEST(Decompose, CoarseVectorsAreUnique)
{
  const Substructure s = make(16, 2, 20.0, 0.3);
  const ComplexVector u0 = random_complex(s.coarse_dim(), 5);
  const auto parts = s.decompose(s.apply_R0T(u0));
  EXPECT_LE((parts.v0 - u0).norm(), 1e-11 * u0.norm());
  for (const auto &vi : parts.v_i) EXPECT_LE(vi.norm(), 1e-11 * u0.norm());
}

TEST(Decompose, Reconstruction)
{
  const Substructure s = make(8, 2, 10.0, 0.01);
  for (int t = 0; t < 5; ++t)
  {
    const ComplexVector v = random_complex(s.decomposition().num_dofs(), 40 + t);
    EXPECT_LE((s.recompose(s.decompose(v)) - v).norm(), 1e-11 * v.norm());
  }
}

TEST(Decompose, GammaOnlyVectorGivesInteriorDiscrepancy)
{
  const Substructure s = make(8, 2, 10.0, 0.3);
  const Decomposition &dec = s.decomposition();
  ComplexVector v = ComplexVector::Zero(dec.num_dofs());
  v.head(s.num_gamma()) = random_complex(s.num_gamma(), 3);
  const auto parts = s.decompose(v);
  // R0^T v0 extends into the interior; the v_i cancel exactly that extension.
  const ComplexVector ext = s.apply_R0T(parts.v0);
  EXPECT_LE((ext.head(s.num_gamma()) - v.head(s.num_gamma())).norm(), 1e-12 * v.norm());
  EXPECT_LE((s.recompose(parts) - v).norm(), 1e-11 * v.norm());
}

TEST(H0Extension, EnergyIdentity)
{
  const Substructure s = make(16, 2, 20.0, 0.3);
  const GlobalSystem sys = assemble_global(s.mesh(), s.decomposition(), 20.0);
  const ComplexVector u0 = random_complex(s.coarse_dim(), 9);
  const ComplexVector E = s.apply_H0T(u0);
  const Complex lhs = u0.dot(s.H0_assembled().cast<Complex>() * u0);
  const Complex rhs = E.dot(sys.H.cast<Complex>() * E);
  EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(rhs));
}
