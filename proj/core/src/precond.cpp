// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include "nosas/precond.hpp"

#include <algorithm>
#include <climits>
#include <string>

namespace nosas
{

namespace
{

// Accumulates per-subdomain low-rank factors into one global pair.
class PairBuilder
{
public:
  explicit PairBuilder(Index n) : n_(n) {}

  void add(const SubdomainData &d, const ComplexMatrix &U_loc, const ComplexMatrix &V_loc)
  {
    for (Index c = 0; c < U_loc.cols(); ++c)
    {
      for (Index r = 0; r < U_loc.rows(); ++r)
      {
        if (U_loc(r, c) != Complex(0.0))
        {
          ut_.emplace_back(d.coarse_index[r], rank_ + c, U_loc(r, c));
        }
      }
    }
    for (Index c = 0; c < V_loc.cols(); ++c)
    {
      for (Index r = 0; r < V_loc.rows(); ++r)
      {
        if (V_loc(r, c) != Complex(0.0))
        {
          vt_.emplace_back(rank_ + r, d.coarse_index[c], V_loc(r, c));
        }
      }
    }
    rank_ += U_loc.cols();
  }

  LowRankPair finish() const
  {
    LowRankPair p;
    p.U.resize(n_, rank_);
    p.U.setFromTriplets(ut_.begin(), ut_.end());
    p.V.resize(rank_, n_);
    p.V.setFromTriplets(vt_.begin(), vt_.end());
    return p;
  }

private:
  Index n_;
  Index rank_ = 0;
  std::vector<ComplexTriplet> ut_, vt_;
};

ComplexMatrix cplx(const RealMatrix &A)
{
  return A.cast<Complex>();
}

bool uses_diag_imag(PrecondKind kind)
{
  return kind == PrecondKind::P3 || kind == PrecondKind::P4;
}

}  // namespace

ComplexVector CorePlusLowRank::apply(const ComplexVector &u0) const
{
  ComplexVector y = C * u0;
  for (const auto &p : pairs)
  {
    y -= p.U * (p.V * u0);
  }
  return y;
}

ComplexMatrix CorePlusLowRank::dense() const
{
  ComplexMatrix out = ComplexMatrix(C);
  for (const auto &p : pairs)
  {
    out -= ComplexMatrix(p.U) * ComplexMatrix(p.V);
  }
  return out;
}

CorePlusLowRank build_bp(const Substructure &sub, const std::vector<SubdomainSpectra> &spectra,
                         PrecondKind kind)
{
  if (kind == PrecondKind::Exact)
  {
    throw ConfigError("build_bp: the exact kind has no low-rank form");
  }
  const Index n = sub.coarse_dim();
  CorePlusLowRank out;
  out.kind = kind;

  std::vector<ComplexTriplet> ct;
  for (int i = 0; i < sub.num_subdomains(); ++i)
  {
    const SubdomainData &d = sub.subdomain(i);
    const SubdomainSpectra &sp = spectra[i];
    const RealMatrix &im = uses_diag_imag(kind) ? sp.CDiag : sp.ImB0;
    for (Index c = 0; c < d.coarse_size(); ++c)
    {
      for (Index r = 0; r < d.coarse_size(); ++r)
      {
        const Complex v(sp.C0(r, c), im(r, c));
        if (v != Complex(0.0))
        {
          ct.emplace_back(d.coarse_index[r], d.coarse_index[c], v);
        }
      }
    }
  }
  out.C.resize(n, n);
  out.C.setFromTriplets(ct.begin(), ct.end());
  out.C.makeCompressed();

  const bool two_stage_re = kind == PrecondKind::P1 || kind == PrecondKind::P3;
  PairBuilder re1(n), re2(n), im1(n), im2(n);
  for (int i = 0; i < sub.num_subdomains(); ++i)
  {
    const SubdomainData &d = sub.subdomain(i);
    const SubdomainSpectra &sp = spectra[i];
    const Index cs = d.coarse_size();
    const RealMatrix I = RealMatrix::Identity(cs, cs);

    const ProjectorPair &re = sp.re;
    if (re.size() > 0)
    {
      if (two_stage_re)
      {
        const RealMatrix &Q = re.Q, &H0 = re.metric, &D = re.D;
        re1.add(d, cplx(D * Q), cplx(Q.transpose() * H0));
        re2.add(d, cplx(H0 * Q), cplx(Q.transpose() * D * (I - Q * Q.transpose() * H0)));
      }
      else
      {
        const RealMatrix C0Q = sp.C0 * re.Q;
        re1.add(d, cplx(C0Q * re.D), cplx(C0Q.transpose()));
      }
    }

    const ProjectorPair &im = sp.im;
    if (im.size() > 0)
    {
      if (kind == PrecondKind::P3)
      {
        const RealMatrix &Q = im.Q, &M = im.metric, &D = im.D;
        im1.add(d, kI * cplx(D * Q), cplx(Q.transpose() * M));
        im2.add(d, kI * cplx(M * Q), cplx(Q.transpose() * D * (I - Q * Q.transpose() * M)));
      }
      else if (kind == PrecondKind::P4)
      {
        const RealMatrix CdQ = sp.CDiag * im.Q;
        im1.add(d, kI * cplx(CdQ * im.D), cplx(CdQ.transpose()));
      }
    }
  }
  out.pairs.push_back(re1.finish());
  if (two_stage_re)
  {
    out.pairs.push_back(re2.finish());
  }
  if (kind == PrecondKind::P3)
  {
    out.pairs.push_back(im1.finish());
    out.pairs.push_back(im2.finish());
  }
  else if (kind == PrecondKind::P4)
  {
    out.pairs.push_back(im1.finish());
  }

  try
  {
    out.woodbury = std::make_shared<WoodburyOperator>(sparse_lu_solver(out.C), out.pairs);
  }
  catch (const SingularMatrixError &e)
  {
    const std::string eta = spectra.empty() ? "?" : std::to_string(spectra.front().re.eta);
    throw ConfigError("preconditioner " + to_string(kind) + " with eta_re=" + eta +
                      " is singular: " + e.what());
  }
  return out;
}

ComplexMatrix local_bp_projection_form(const SubdomainData &d, const SubdomainSpectra &sp,
                                       PrecondKind kind)
{
  const Index cs = d.coarse_size();
  const RealMatrix I = RealMatrix::Identity(cs, cs);
  const RealMatrix &ReB0 = sp.ReB0, &ImB0 = sp.ImB0, &C0 = sp.C0, &Cd = sp.CDiag;
  const RealMatrix Pre = sp.re.projector();
  const RealMatrix Pim = sp.im.projector();

  RealMatrix re, im;
  switch (kind)
  {
    case PrecondKind::P1:
    case PrecondKind::P3:
      re = ReB0 - (I - Pre).transpose() * ReB0 * (I - Pre) + (I - Pre).transpose() * C0 * (I - Pre);
      break;
    case PrecondKind::P2:
    case PrecondKind::P4:
      re = Pre.transpose() * ReB0 * Pre + (I - Pre).transpose() * C0 * (I - Pre);
      break;
    case PrecondKind::Exact:
      re = ReB0;
      break;
  }
  switch (kind)
  {
    case PrecondKind::P1:
    case PrecondKind::P2:
    case PrecondKind::Exact:
      im = ImB0;
      break;
    case PrecondKind::P3:
      im = ImB0 - (I - Pim).transpose() * ImB0 * (I - Pim) + (I - Pim).transpose() * Cd * (I - Pim);
      break;
    case PrecondKind::P4:
      im = Pim.transpose() * ImB0 * Pim + (I - Pim).transpose() * Cd * (I - Pim);
      break;
  }
  ComplexMatrix out(cs, cs);
  out.real() = re;
  out.imag() = im;
  return out;
}

ComplexMatrix reference_bp_dense(const Substructure &sub,
                                 const std::vector<SubdomainSpectra> &spectra, PrecondKind kind)
{
  const Index n = sub.coarse_dim();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < sub.num_subdomains(); ++i)
  {
    const SubdomainData &d = sub.subdomain(i);
    const ComplexMatrix loc = local_bp_projection_form(d, spectra[i], kind);
    for (Index c = 0; c < d.coarse_size(); ++c)
    {
      for (Index r = 0; r < d.coarse_size(); ++r)
      {
        out(d.coarse_index[r], d.coarse_index[c]) += loc(r, c);
      }
    }
  }
  return out;
}

std::vector<long> coarse_groups(const Substructure &sub)
{
  const Index ng = sub.num_gamma();
  const long N = sub.num_subdomains();
  std::vector<long> group(sub.coarse_dim(), LONG_MAX);
  for (int i = 0; i < sub.num_subdomains(); ++i)
  {
    const SubdomainData &d = sub.subdomain(i);
    const std::vector<int> label = coarse_block_labels(sub.decomposition().subdomains[i]);
    for (Index p = 0; p < d.num_gamma(); ++p)
    {
      const Index idx = d.coarse_index[p];
      const long key = label[p] >= 4 ? static_cast<long>(idx) : ng + 4L * i + label[p];
      group[idx] = std::min(group[idx], key);
    }
    for (Index j = 0; j < d.num_small(); ++j)
    {
      group[d.coarse_index[d.num_gamma() + j]] = ng + 4L * N + i;
    }
  }
  return group;
}

Index core_block_violations(const Substructure &sub, const ComplexSparse &C, PrecondKind kind)
{
  const std::vector<long> group = coarse_groups(sub);
  const Decomposition &dec = sub.decomposition();
  const Mesh &mesh = sub.mesh();
  const Index ng = sub.num_gamma();
  auto on_outer = [&](Index idx) { return idx < ng && mesh.on_boundary[dec.gamma[idx]]; };
  Index bad = 0;
  for (int c = 0; c < C.outerSize(); ++c)
  {
    for (ComplexSparse::InnerIterator it(C, c); it; ++it)
    {
      const Index r = it.row();
      if (r == c || group[r] == group[c])
      {
        continue;
      }
      if (!uses_diag_imag(kind) && on_outer(r) && on_outer(c))
      {
        continue;
      }
      ++bad;
    }
  }
  return bad;
}

Preconditioner::Preconditioner(const Substructure &sub, std::vector<SubdomainSpectra> spectra,
                               PrecondKind kind)
  : sub_(&sub), kind_(kind), spectra_(std::move(spectra))
{
  if (kind_ == PrecondKind::Exact)
  {
    exact_ = sparse_lu_solver(sub.B0());
  }
  else
  {
    bp_ = build_bp(sub, spectra_, kind_);
  }
}

ComplexVector Preconditioner::apply_coarse_inverse(const ComplexVector &r0) const
{
  return kind_ == PrecondKind::Exact ? exact_(r0) : bp_.apply_inverse(r0);
}

ComplexVector Preconditioner::apply_full(const ComplexVector &v) const
{
  const Substructure &s = *sub_;
  ComplexVector out = s.apply_R0T(apply_coarse_inverse(s.apply_R0(v)));
  const Decomposition &dec = s.decomposition();
  for (int i = 0; i < s.num_subdomains(); ++i)
  {
    const ComplexVector ui = s.local_solve(i, s.gather_interior(i, v));
    for (Index p = 0; p < ui.size(); ++p)
    {
      out(dec.interior_slot(dec.subdomains[i], p)) += ui(p);
    }
  }
  return out;
}

}  // namespace nosas
