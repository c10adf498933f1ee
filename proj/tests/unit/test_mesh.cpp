// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "nosas/mesh.hpp"
#include "oracles.hpp"

using namespace nosas;

TEST(Mesh, CountsSmall)
{
  const Mesh m = build_mesh(2);
  EXPECT_EQ(m.num_nodes(), 9);
  EXPECT_EQ(m.triangles.size(), 8u);
}

TEST(Mesh, CountsDeskScale)
{
  const Mesh m = build_mesh(32);
  EXPECT_EQ(m.num_nodes(), 1089);
  EXPECT_EQ(m.triangles.size(), 2048u);
  EXPECT_EQ(m.boundary_nodes.size(), 128u);
}

TEST(Mesh, InteriorNodeIncidence)
{
  const Mesh m = build_mesh(4);
  const Index v = m.node_index(1, 2);
  EXPECT_DOUBLE_EQ(m.nodes[v].x, 0.25);
  EXPECT_DOUBLE_EQ(m.nodes[v].y, 0.5);
  EXPECT_FALSE(m.on_boundary[v]);
  EXPECT_EQ(oracle::incident_triangles(m, v), 6);
}

TEST(Mesh, TrianglesCounterclockwiseAlongRisingDiagonal)
{
  const Mesh m = build_mesh(8);
  for (const auto &t : m.triangles)
  {
    const Point a = m.nodes[t[0]], b = m.nodes[t[1]], c = m.nodes[t[2]];
    EXPECT_GT((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y), 0.0);
  }
  // Lower-left corner square: the shared edge joins (0,0) and (h,h).
  const Index ll = m.node_index(0, 0), ur = m.node_index(1, 1);
  int shared = 0;
  for (std::size_t e = 0; e < 2; ++e)
  {
    const auto &t = m.triangles[e];
    shared += std::count(t.begin(), t.end(), ll) && std::count(t.begin(), t.end(), ur);
  }
  EXPECT_EQ(shared, 2);
}

TEST(Mesh, RejectsTooCoarse)
{
  EXPECT_THROW(build_mesh(1), ConfigError);
  EXPECT_THROW(build_mesh(0), ConfigError);
}

TEST(Decomposition, FourSubdomainsOneInteriorEach)
{
  const Mesh m = build_mesh(4);
  const Decomposition d = build_decomposition(m, 2);
  ASSERT_EQ(d.num_subdomains(), 4);
  for (const auto &s : d.subdomains)
  {
    EXPECT_EQ(s.gamma.size(), 8u);
    EXPECT_EQ(s.interior.size(), 1u);
  }
}

TEST(Decomposition, InterfaceSizeByClassification)
{
  const Mesh m = build_mesh(8);
  const Decomposition d = build_decomposition(m, 2);
  // Brute force: a node is interior to a subdomain iff strictly inside one of the squares.
  int interior = 0;
  for (const Point &p : m.nodes)
  {
    const double sx = p.x * 2, sy = p.y * 2;
    const bool inside = std::abs(sx - std::round(sx)) > 1e-12 && std::abs(sy - std::round(sy)) > 1e-12;
    interior += inside;
  }
  EXPECT_EQ(interior, 36);
  EXPECT_EQ(d.num_gamma(), 81 - interior);
  EXPECT_EQ(d.num_gamma(), 45);
}

TEST(Decomposition, BoundaryAndCornerStructure)
{
  const Mesh m = build_mesh(32);
  const Decomposition d = build_decomposition(m, 2);
  const Subdomain &s0 = d.subdomains[0];
  EXPECT_TRUE(s0.touches_boundary());
  // Touches x=0 and y=0: 2*17 - 1 nodes of Gamma_0 lie on the outer boundary.
  EXPECT_EQ(s0.pi.size(), 33u);
  EXPECT_EQ(s0.cross_points.size(), 4u);
  ASSERT_EQ(s0.edge_segments.size(), 4u);
  for (const auto &seg : s0.edge_segments) EXPECT_EQ(seg.size(), 15u);
}

TEST(Decomposition, InteriorSubdomainHasNoPi)
{
  const Mesh m = build_mesh(16);
  const Decomposition d = build_decomposition(m, 4);
  EXPECT_TRUE(d.subdomains[5].pi.empty());
  EXPECT_EQ(d.subdomains[5].ix, 1);
  EXPECT_EQ(d.subdomains[5].iy, 1);
}

TEST(Decomposition, PositionIsPermutation)
{
  const Mesh m = build_mesh(16);
  const Decomposition d = build_decomposition(m, 4);
  std::vector<Index> p = d.position;
  std::sort(p.begin(), p.end());
  std::vector<Index> expect(p.size());
  std::iota(expect.begin(), expect.end(), 0);
  EXPECT_EQ(p, expect);
  for (Index i = 0; i < d.num_gamma(); ++i) EXPECT_EQ(d.position[d.gamma[i]], i);
  EXPECT_TRUE(std::is_sorted(d.gamma.begin(), d.gamma.end()));
}

TEST(Decomposition, RejectsBadSizes)
{
  const Mesh m = build_mesh(8);
  EXPECT_THROW(build_decomposition(m, 1), ConfigError);
  EXPECT_THROW(build_decomposition(m, 3), ConfigError);
  EXPECT_THROW(build_decomposition(m, 8), ConfigError);
}
