// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_MESH_HPP
#define NOSAS_MESH_HPP

#include <array>
#include <vector>

#include "nosas/types.hpp"

namespace nosas
{

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

//
// Structured triangulation of the unit square. Nodes are numbered lexicographically by
// (y, x): node (i, j) at (i*h, j*h) has index j*(inv_h+1)+i. Every grid square is split
// along its lower-left to upper-right diagonal into two counterclockwise triangles.
//
struct Mesh
{
  int inv_h = 0;
  std::vector<Point> nodes;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<Index> boundary_nodes;  // sorted
  std::vector<char> on_boundary;      // per node flag

  double h() const { return 1.0 / inv_h; }
  Index num_nodes() const { return static_cast<Index>(nodes.size()); }
  Index node_index(int i, int j) const { return static_cast<Index>(j) * (inv_h + 1) + i; }
};

struct Subdomain
{
  int id = 0;
  int ix = 0, iy = 0;              // position in the subdomain grid
  std::vector<Index> triangles;    // element indices
  std::vector<Index> gamma;        // Gamma_i: boundary nodes of the subdomain square (global ids)
  std::vector<Index> interior;     // I_i (global ids)
  std::vector<Index> pi;           // Gamma_i nodes on the outer boundary, as positions into gamma
  std::vector<Index> cross_points; // subdomain corners, as positions into gamma
  std::vector<std::vector<Index>> edge_segments;  // corner-free sides, positions into gamma

  bool touches_boundary() const { return !pi.empty(); }
};

//
// Nonoverlapping inv_H x inv_H partition into square subdomains. Fine vectors are ordered
// (Gamma, I): gamma[] first, then interior[]; position[] maps a node id to that ordering.
//
struct Decomposition
{
  int inv_H = 0;
  int cells_per_side = 0;  // inv_h / inv_H
  std::vector<Subdomain> subdomains;
  std::vector<Index> gamma;     // global interface, sorted node ids
  std::vector<Index> interior;  // global interior, sorted node ids
  std::vector<Index> position;  // node id -> index in (Gamma, I) ordering
  std::vector<int> owner;       // interior node id -> subdomain id, -1 on Gamma

  Index num_gamma() const { return static_cast<Index>(gamma.size()); }
  Index num_interior() const { return static_cast<Index>(interior.size()); }
  Index num_dofs() const { return num_gamma() + num_interior(); }
  int num_subdomains() const { return static_cast<int>(subdomains.size()); }

  // Restriction R_{Gamma_i Gamma}: gamma-local position -> index into the Gamma block.
  Index gamma_slot(const Subdomain &s, Index local) const { return position[s.gamma[local]]; }
  // Restriction R_{I_i I}: interior-local position -> index into the fine (Gamma, I) vector.
  Index interior_slot(const Subdomain &s, Index local) const
  {
    return position[s.interior[local]];
  }
};

Mesh build_mesh(int inv_h);

Decomposition build_decomposition(const Mesh &mesh, int inv_H);

}  // namespace nosas

#endif  // NOSAS_MESH_HPP
