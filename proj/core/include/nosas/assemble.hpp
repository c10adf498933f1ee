// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_ASSEMBLE_HPP
#define NOSAS_ASSEMBLE_HPP

#include <array>

#include <Eigen/Dense>

#include "nosas/mesh.hpp"
#include "nosas/types.hpp"

namespace nosas
{

// Plane-wave propagation direction (cos(pi/8), sin(pi/8)).
Point plane_wave_direction();

struct ElementMatrices
{
  Eigen::Matrix3d stiffness;
  Eigen::Matrix3d mass;
  // boundary_mass[e] is the 1D P1 mass matrix of edge (e, e+1 mod 3).
  std::array<Eigen::Matrix2d, 3> boundary_mass;
};

// Exact P1 integrals over one triangle. Throws ConfigError for a degenerate triangle.
ElementMatrices element_matrices(const std::array<Point, 3> &triangle);

Eigen::Matrix2d edge_mass(double length);

//
// Neumann matrices of one subdomain in local (Gamma_i, I_i) ordering:
//   B = A - k^2 M + i k M_boundary,  H = A + k^2 M,
// where M_boundary integrates over the part of the subdomain boundary on the outer boundary.
// Blocks coupling interior nodes are real, so only B_gg is stored complex.
//
struct LocalOperators
{
  int subdomain = 0;
  double k = 0.0;
  ComplexMatrix B_gg;
  RealMatrix B_gI, B_Ig, B_II;
  RealMatrix H_gg, H_gI, H_Ig, H_II;
  RealMatrix A_gg, A_gI, A_Ig, A_II;
  RealMatrix Im_B_gg;

  Index num_gamma() const { return B_gg.rows(); }
  Index num_interior() const { return B_II.rows(); }
  ComplexMatrix B_full() const;
  RealMatrix H_full() const;
  RealMatrix A_full() const;
};

LocalOperators assemble_local(const Mesh &mesh, const Decomposition &dec, int subdomain,
                              double k);

// Global matrices in (Gamma, I) ordering; rhs from the plane-wave impedance data.
struct GlobalSystem
{
  double k = 0.0;
  ComplexSparse B;
  RealSparse H;
  RealSparse A;
  ComplexVector rhs;
};

GlobalSystem assemble_global(const Mesh &mesh, const Decomposition &dec, double k);

// Load vector l_v = int_{dOmega} g phi_v ds in node ordering, g = du/dn + i k u for the plane
// wave u = exp(i k V.x). Edge integrals are exact.
ComplexVector plane_wave_rhs(const Mesh &mesh, double k);

// exp(i k V.x) at every node, node ordering.
ComplexVector plane_wave(const Mesh &mesh, double k);

// Permutes a node-ordered vector to (Gamma, I) ordering and back.
ComplexVector to_fine_ordering(const Decomposition &dec, const ComplexVector &by_node);
ComplexVector to_node_ordering(const Decomposition &dec, const ComplexVector &fine);

//
// Per-subdomain auxiliary matrices for the coarse preconditioners:
//   C0_gg   block-diagonal part of H_hat_gg (one block per edge segment, 1x1 per corner),
//   c_diag  diagonal of Im B_gg on Pi_i,
//   S_pipi  Schur complement of H^(i) onto Pi_i.
//
struct CoarseAux
{
  RealMatrix C0_gg;
  RealVector c_diag;
  RealMatrix S_pipi;
};

CoarseAux assemble_coarse_aux(const LocalOperators &local, const Subdomain &subdomain,
                              const RealMatrix &H_hat_gg);

// Block label per Gamma_i position: 0..3 for the edge segments, 4+j for cross point j.
std::vector<int> coarse_block_labels(const Subdomain &subdomain);

// Pattern predicate for C0_gg: same edge segment, or the same cross point.
bool coarse_block_coupled(const Subdomain &subdomain, Index r, Index c);

}  // namespace nosas

#endif  // NOSAS_ASSEMBLE_HPP
