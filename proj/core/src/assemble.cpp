// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include "nosas/assemble.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace nosas
{

Point plane_wave_direction()
{
  return {std::cos(std::numbers::pi / 8.0), std::sin(std::numbers::pi / 8.0)};
}

Eigen::Matrix2d edge_mass(double length)
{
  Eigen::Matrix2d m;
  m << 2.0, 1.0, 1.0, 2.0;
  return m * (length / 6.0);
}

ElementMatrices element_matrices(const std::array<Point, 3> &t)
{
  const double det = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y);
  double scale = 0.0;
  for (int e = 0; e < 3; ++e)
  {
    const Point &a = t[e], &b = t[(e + 1) % 3];
    scale = std::max(scale, std::hypot(b.x - a.x, b.y - a.y));
  }
  if (!(std::abs(det) > 1e-14 * scale * scale))
  {
    throw ConfigError("element_matrices: degenerate triangle");
  }
  const double area = 0.5 * std::abs(det);

  // Gradient of barycentric coordinate i is perp(p_{i+2} - p_{i+1}) / det.
  std::array<Eigen::Vector2d, 3> grad;
  for (int i = 0; i < 3; ++i)
  {
    const Point &a = t[(i + 1) % 3], &b = t[(i + 2) % 3];
    grad[i] = Eigen::Vector2d(a.y - b.y, b.x - a.x) / det;
  }

  ElementMatrices out;
  for (int i = 0; i < 3; ++i)
  {
    for (int j = 0; j < 3; ++j)
    {
      out.stiffness(i, j) = area * grad[i].dot(grad[j]);
      out.mass(i, j) = area / 12.0 * (i == j ? 2.0 : 1.0);
    }
  }
  for (int e = 0; e < 3; ++e)
  {
    const Point &a = t[e], &b = t[(e + 1) % 3];
    out.boundary_mass[e] = edge_mass(std::hypot(b.x - a.x, b.y - a.y));
  }
  return out;
}

namespace
{

// An element edge lies on the outer boundary iff both end nodes lie on the same side.
bool edge_on_outer_boundary(const Mesh &mesh, Index a, Index b)
{
  const int n = mesh.inv_h;
  const int ia = static_cast<int>(a % (n + 1)), ja = static_cast<int>(a / (n + 1));
  const int ib = static_cast<int>(b % (n + 1)), jb = static_cast<int>(b / (n + 1));
  return (ia == 0 && ib == 0) || (ia == n && ib == n) || (ja == 0 && jb == 0) ||
         (ja == n && jb == n);
}

std::array<Point, 3> triangle_points(const Mesh &mesh, const std::array<Index, 3> &tri)
{
  return {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
}

}  // namespace

ComplexMatrix LocalOperators::B_full() const
{
  const Index ng = num_gamma(), ni = num_interior();
  ComplexMatrix B(ng + ni, ng + ni);
  B.topLeftCorner(ng, ng) = B_gg;
  B.topRightCorner(ng, ni) = B_gI.cast<Complex>();
  B.bottomLeftCorner(ni, ng) = B_Ig.cast<Complex>();
  B.bottomRightCorner(ni, ni) = B_II.cast<Complex>();
  return B;
}

RealMatrix LocalOperators::H_full() const
{
  const Index ng = num_gamma(), ni = num_interior();
  RealMatrix H(ng + ni, ng + ni);
  H << H_gg, H_gI, H_Ig, H_II;
  return H;
}

RealMatrix LocalOperators::A_full() const
{
  const Index ng = num_gamma(), ni = num_interior();
  RealMatrix A(ng + ni, ng + ni);
  A << A_gg, A_gI, A_Ig, A_II;
  return A;
}

LocalOperators assemble_local(const Mesh &mesh, const Decomposition &dec, int subdomain, double k)
{
  if (subdomain < 0 || subdomain >= dec.num_subdomains())
  {
    throw ConfigError("assemble_local: invalid subdomain id " + std::to_string(subdomain));
  }
  if (!(k > 0.0))
  {
    throw ConfigError("wavenumber k must be positive");
  }
  const Subdomain &s = dec.subdomains[subdomain];
  const Index ng = static_cast<Index>(s.gamma.size());
  const Index ni = static_cast<Index>(s.interior.size());
  const Index nl = ng + ni;

  std::vector<Index> local(mesh.num_nodes(), -1);
  for (Index p = 0; p < ng; ++p)
  {
    local[s.gamma[p]] = p;
  }
  for (Index p = 0; p < ni; ++p)
  {
    local[s.interior[p]] = ng + p;
  }

  RealMatrix A = RealMatrix::Zero(nl, nl);
  RealMatrix M = RealMatrix::Zero(nl, nl);
  RealMatrix Mb = RealMatrix::Zero(nl, nl);
  for (Index t : s.triangles)
  {
    const auto &tri = mesh.triangles[t];
    const ElementMatrices em = element_matrices(triangle_points(mesh, tri));
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        A(local[tri[a]], local[tri[b]]) += em.stiffness(a, b);
        M(local[tri[a]], local[tri[b]]) += em.mass(a, b);
      }
    }
    for (int e = 0; e < 3; ++e)
    {
      const Index va = tri[e], vb = tri[(e + 1) % 3];
      if (!edge_on_outer_boundary(mesh, va, vb))
      {
        continue;
      }
      const Index la = local[va], lb = local[vb];
      const auto &bm = em.boundary_mass[e];
      Mb(la, la) += bm(0, 0);
      Mb(la, lb) += bm(0, 1);
      Mb(lb, la) += bm(1, 0);
      Mb(lb, lb) += bm(1, 1);
    }
  }

  LocalOperators out;
  out.subdomain = subdomain;
  out.k = k;
  const double k2 = k * k;
  const RealMatrix reB = A - k2 * M;
  const RealMatrix H = A + k2 * M;
  out.Im_B_gg = k * Mb.topLeftCorner(ng, ng);
  out.B_gg = reB.topLeftCorner(ng, ng).cast<Complex>() + kI * out.Im_B_gg.cast<Complex>();
  out.B_gI = reB.topRightCorner(ng, ni);
  out.B_Ig = reB.bottomLeftCorner(ni, ng);
  out.B_II = reB.bottomRightCorner(ni, ni);
  out.H_gg = H.topLeftCorner(ng, ng);
  out.H_gI = H.topRightCorner(ng, ni);
  out.H_Ig = H.bottomLeftCorner(ni, ng);
  out.H_II = H.bottomRightCorner(ni, ni);
  out.A_gg = A.topLeftCorner(ng, ng);
  out.A_gI = A.topRightCorner(ng, ni);
  out.A_Ig = A.bottomLeftCorner(ni, ng);
  out.A_II = A.bottomRightCorner(ni, ni);
  return out;
}

namespace
{

// int_0^1 e^{bt} dt and int_0^1 t e^{bt} dt, with series near b = 0.
std::pair<Complex, Complex> exp_moments(Complex b)
{
  if (std::abs(b) < 0.1)
  {
    Complex e0 = 0.0, e1 = 0.0, term = 1.0;  // term = b^n / n!
    for (int n = 0; n < 14; ++n)
    {
      e0 += term / static_cast<double>(n + 1);
      e1 += term / static_cast<double>(n + 2);
      term *= b / static_cast<double>(n + 1);
    }
    return {e0, e1};
  }
  const Complex eb = std::exp(b);
  return {(eb - 1.0) / b, (eb * (b - 1.0) + 1.0) / (b * b)};
}

}  // namespace

ComplexVector plane_wave_rhs(const Mesh &mesh, double k)
{
  const Point V = plane_wave_direction();
  const int n = mesh.inv_h;
  ComplexVector l = ComplexVector::Zero(mesh.num_nodes());

  struct Side
  {
    Point normal;
    int i0, j0, di, dj;
  };
  const Side sides[4] = {
      {{0.0, -1.0}, 0, 0, 1, 0},  // y = 0
      {{1.0, 0.0}, n, 0, 0, 1},   // x = 1
      {{0.0, 1.0}, 0, n, 1, 0},   // y = 1
      {{-1.0, 0.0}, 0, 0, 0, 1},  // x = 0
  };
  for (const Side &side : sides)
  {
    const Complex weight = kI * k * (V.x * side.normal.x + V.y * side.normal.y + 1.0);
    for (int e = 0; e < n; ++e)
    {
      const Index va = mesh.node_index(side.i0 + e * side.di, side.j0 + e * side.dj);
      const Index vb = mesh.node_index(side.i0 + (e + 1) * side.di, side.j0 + (e + 1) * side.dj);
      const Point &pa = mesh.nodes[va], &pb = mesh.nodes[vb];
      const double length = std::hypot(pb.x - pa.x, pb.y - pa.y);
      const Complex a = kI * k * (V.x * pa.x + V.y * pa.y);
      const Complex b = kI * k * (V.x * (pb.x - pa.x) + V.y * (pb.y - pa.y));
      const auto [e0, e1] = exp_moments(b);
      const Complex scale = weight * length * std::exp(a);
      l(va) += scale * (e0 - e1);
      l(vb) += scale * e1;
    }
  }
  return l;
}

ComplexVector plane_wave(const Mesh &mesh, double k)
{
  const Point V = plane_wave_direction();
  ComplexVector u(mesh.num_nodes());
  for (Index v = 0; v < mesh.num_nodes(); ++v)
  {
    u(v) = std::exp(kI * k * (V.x * mesh.nodes[v].x + V.y * mesh.nodes[v].y));
  }
  return u;
}

ComplexVector to_fine_ordering(const Decomposition &dec, const ComplexVector &by_node)
{
  ComplexVector out(by_node.size());
  for (Index v = 0; v < by_node.size(); ++v)
  {
    out(dec.position[v]) = by_node(v);
  }
  return out;
}

ComplexVector to_node_ordering(const Decomposition &dec, const ComplexVector &fine)
{
  ComplexVector out(fine.size());
  for (Index v = 0; v < fine.size(); ++v)
  {
    out(v) = fine(dec.position[v]);
  }
  return out;
}

GlobalSystem assemble_global(const Mesh &mesh, const Decomposition &dec, double k)
{
  if (!(k > 0.0))
  {
    throw ConfigError("wavenumber k must be positive");
  }
  const Index n = mesh.num_nodes();
  std::vector<ComplexTriplet> bt;
  std::vector<RealTriplet> ht, at;
  bt.reserve(mesh.triangles.size() * 9 + 4 * mesh.inv_h * 4);
  ht.reserve(mesh.triangles.size() * 9);
  at.reserve(mesh.triangles.size() * 9);
  const double k2 = k * k;
  for (const auto &tri : mesh.triangles)
  {
    const ElementMatrices em = element_matrices(triangle_points(mesh, tri));
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        const Index r = dec.position[tri[a]], c = dec.position[tri[b]];
        bt.emplace_back(r, c, em.stiffness(a, b) - k2 * em.mass(a, b));
        ht.emplace_back(r, c, em.stiffness(a, b) + k2 * em.mass(a, b));
        at.emplace_back(r, c, em.stiffness(a, b));
      }
    }
    for (int e = 0; e < 3; ++e)
    {
      const Index va = tri[e], vb = tri[(e + 1) % 3];
      if (!edge_on_outer_boundary(mesh, va, vb))
      {
        continue;
      }
      const Index ra = dec.position[va], rb = dec.position[vb];
      const auto &bm = em.boundary_mass[e];
      bt.emplace_back(ra, ra, kI * k * bm(0, 0));
      bt.emplace_back(ra, rb, kI * k * bm(0, 1));
      bt.emplace_back(rb, ra, kI * k * bm(1, 0));
      bt.emplace_back(rb, rb, kI * k * bm(1, 1));
    }
  }
  GlobalSystem sys;
  sys.k = k;
  sys.B.resize(n, n);
  sys.B.setFromTriplets(bt.begin(), bt.end());
  sys.H.resize(n, n);
  sys.H.setFromTriplets(ht.begin(), ht.end());
  sys.A.resize(n, n);
  sys.A.setFromTriplets(at.begin(), at.end());
  sys.rhs = to_fine_ordering(dec, plane_wave_rhs(mesh, k));
  return sys;
}

std::vector<int> coarse_block_labels(const Subdomain &s)
{
  std::vector<int> label(s.gamma.size(), -1);
  for (std::size_t seg = 0; seg < s.edge_segments.size(); ++seg)
  {
    for (Index p : s.edge_segments[seg])
    {
      label[p] = static_cast<int>(seg);
    }
  }
  for (std::size_t c = 0; c < s.cross_points.size(); ++c)
  {
    label[s.cross_points[c]] = static_cast<int>(4 + c);
  }
  return label;
}

bool coarse_block_coupled(const Subdomain &s, Index r, Index c)
{
  const std::vector<int> label = coarse_block_labels(s);
  return label[r] == label[c];
}

CoarseAux assemble_coarse_aux(const LocalOperators &local, const Subdomain &s,
                              const RealMatrix &H_hat_gg)
{
  const Index ng = local.num_gamma();
  if (H_hat_gg.rows() != ng || H_hat_gg.cols() != ng)
  {
    throw ConfigError("assemble_coarse_aux: H_hat has wrong size");
  }
  CoarseAux aux;
  const std::vector<int> label = coarse_block_labels(s);
  aux.C0_gg = RealMatrix::Zero(ng, ng);
  for (Index c = 0; c < ng; ++c)
  {
    for (Index r = 0; r < ng; ++r)
    {
      if (label[r] == label[c])
      {
        aux.C0_gg(r, c) = H_hat_gg(r, c);
      }
    }
  }

  const Index np = static_cast<Index>(s.pi.size());
  aux.c_diag.resize(np);
  for (Index a = 0; a < np; ++a)
  {
    aux.c_diag(a) = local.Im_B_gg(s.pi[a], s.pi[a]);
  }
  if (np == 0)
  {
    aux.S_pipi.resize(0, 0);
    return aux;
  }

  // S = H_PP - H_PR H_RR^{-1} H_RP with R = I_i and the Gamma_i nodes off the outer boundary.
  const RealMatrix H = local.H_full();
  const Index nl = H.rows();
  std::vector<char> is_pi(nl, 0);
  for (Index p : s.pi)
  {
    is_pi[p] = 1;
  }
  std::vector<Index> rest;
  for (Index r = 0; r < nl; ++r)
  {
    if (!is_pi[r])
    {
      rest.push_back(r);
    }
  }
  const Index nr = static_cast<Index>(rest.size());
  RealMatrix Hpp(np, np), Hpr(np, nr), Hrr(nr, nr);
  for (Index a = 0; a < np; ++a)
  {
    for (Index b = 0; b < np; ++b)
    {
      Hpp(a, b) = H(s.pi[a], s.pi[b]);
    }
    for (Index b = 0; b < nr; ++b)
    {
      Hpr(a, b) = H(s.pi[a], rest[b]);
    }
  }
  for (Index a = 0; a < nr; ++a)
  {
    for (Index b = 0; b < nr; ++b)
    {
      Hrr(a, b) = H(rest[a], rest[b]);
    }
  }
  Eigen::LLT<RealMatrix> llt(Hrr);
  if (llt.info() != Eigen::Success)
  {
    throw NumericalError("assemble_coarse_aux: H_RR is not SPD");
  }
  aux.S_pipi = Hpp - Hpr * llt.solve(Hpr.transpose());
  aux.S_pipi = 0.5 * (aux.S_pipi + aux.S_pipi.transpose()).eval();
  return aux;
}

}  // namespace nosas
