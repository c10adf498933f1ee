// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include "nosas/mesh.hpp"

#include <algorithm>
#include <string>

namespace nosas
{

Mesh build_mesh(int inv_h)
{
  if (inv_h < 2)
  {
    throw ConfigError("inv_h must be at least 2, got " + std::to_string(inv_h));
  }
  Mesh mesh;
  mesh.inv_h = inv_h;
  const int n = inv_h + 1;
  const double h = 1.0 / inv_h;
  mesh.nodes.reserve(static_cast<std::size_t>(n) * n);
  mesh.on_boundary.assign(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i < n; ++i)
    {
      mesh.nodes.push_back({i * h, j * h});
      if (i == 0 || j == 0 || i == inv_h || j == inv_h)
      {
        const Index v = mesh.node_index(i, j);
        mesh.on_boundary[v] = 1;
        mesh.boundary_nodes.push_back(v);
      }
    }
  }

  // Square (i, j) with corners a=(i,j), b=(i+1,j), c=(i+1,j+1), d=(i,j+1) splits into
  // (a,b,c) and (a,c,d); both are counterclockwise.
  mesh.triangles.reserve(2 * static_cast<std::size_t>(inv_h) * inv_h);
  for (int j = 0; j < inv_h; ++j)
  {
    for (int i = 0; i < inv_h; ++i)
    {
      const Index a = mesh.node_index(i, j);
      const Index b = mesh.node_index(i + 1, j);
      const Index c = mesh.node_index(i + 1, j + 1);
      const Index d = mesh.node_index(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  return mesh;
}

Decomposition build_decomposition(const Mesh &mesh, int inv_H)
{
  const int inv_h = mesh.inv_h;
  if (inv_H < 2)
  {
    throw ConfigError("inv_H must be at least 2 (one subdomain has no interface), got " +
                      std::to_string(inv_H));
  }
  if (inv_h % inv_H != 0)
  {
    throw ConfigError("inv_H=" + std::to_string(inv_H) + " must divide inv_h=" +
                      std::to_string(inv_h));
  }
  const int m = inv_h / inv_H;
  if (m < 2)
  {
    throw ConfigError("inv_h/inv_H must be at least 2 so that subdomains have interior nodes");
  }

  Decomposition dec;
  dec.inv_H = inv_H;
  dec.cells_per_side = m;
  const Index num_nodes = mesh.num_nodes();
  dec.position.assign(num_nodes, -1);
  dec.owner.assign(num_nodes, -1);

  for (Index v = 0; v < num_nodes; ++v)
  {
    const int i = static_cast<int>(v % (inv_h + 1));
    const int j = static_cast<int>(v / (inv_h + 1));
    if (i % m == 0 || j % m == 0)
    {
      dec.gamma.push_back(v);
    }
    else
    {
      dec.interior.push_back(v);
    }
  }
  for (std::size_t p = 0; p < dec.gamma.size(); ++p)
  {
    dec.position[dec.gamma[p]] = static_cast<Index>(p);
  }
  for (std::size_t p = 0; p < dec.interior.size(); ++p)
  {
    dec.position[dec.interior[p]] = static_cast<Index>(dec.gamma.size() + p);
  }

  dec.subdomains.resize(static_cast<std::size_t>(inv_H) * inv_H);
  for (int sy = 0; sy < inv_H; ++sy)
  {
    for (int sx = 0; sx < inv_H; ++sx)
    {
      Subdomain &s = dec.subdomains[static_cast<std::size_t>(sy) * inv_H + sx];
      s.id = sy * inv_H + sx;
      s.ix = sx;
      s.iy = sy;
      const int i0 = sx * m, j0 = sy * m;

      // Lexicographic traversal keeps gamma and interior sorted by global id.
      for (int j = j0; j <= j0 + m; ++j)
      {
        for (int i = i0; i <= i0 + m; ++i)
        {
          const Index v = mesh.node_index(i, j);
          const bool on_side = (i == i0 || i == i0 + m || j == j0 || j == j0 + m);
          if (on_side)
          {
            s.gamma.push_back(v);
          }
          else
          {
            s.interior.push_back(v);
            dec.owner[v] = s.id;
          }
        }
      }

      std::vector<Index> bottom, top, left, right;
      for (std::size_t p = 0; p < s.gamma.size(); ++p)
      {
        const Index v = s.gamma[p];
        const int i = static_cast<int>(v % (inv_h + 1));
        const int j = static_cast<int>(v / (inv_h + 1));
        const auto lp = static_cast<Index>(p);
        if (mesh.on_boundary[v])
        {
          s.pi.push_back(lp);
        }
        const bool vertical_side = (i == i0 || i == i0 + m);
        const bool horizontal_side = (j == j0 || j == j0 + m);
        if (vertical_side && horizontal_side)
        {
          s.cross_points.push_back(lp);
        }
        else if (j == j0)
        {
          bottom.push_back(lp);
        }
        else if (j == j0 + m)
        {
          top.push_back(lp);
        }
        else if (i == i0)
        {
          left.push_back(lp);
        }
        else
        {
          right.push_back(lp);
        }
      }
      s.edge_segments = {std::move(bottom), std::move(right), std::move(top), std::move(left)};

      for (int j = j0; j < j0 + m; ++j)
      {
        for (int i = i0; i < i0 + m; ++i)
        {
          const Index sq = static_cast<Index>(j) * inv_h + i;
          s.triangles.push_back(2 * sq);
          s.triangles.push_back(2 * sq + 1);
        }
      }
    }
  }
  return dec;
}

}  // namespace nosas
