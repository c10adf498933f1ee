// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include "nosas/substructure.hpp"

#include <cmath>
#include <utility>

namespace nosas
{

ModeSplit interior_modes(const LocalOperators &local, double beta)
{
  if (!(beta > 0.0))
  {
    throw ConfigError("beta must be positive");
  }
  const GenEigResult eig = gen_eig_spd(local.B_II, local.H_II);
  const Index n = eig.values.size();
  std::vector<Index> small, large;
  for (Index j = 0; j < n; ++j)
  {
    (std::abs(eig.values(j)) < beta ? small : large).push_back(j);
  }
  ModeSplit out;
  out.beta = beta;
  out.mu = eig.values;
  out.Q_S.resize(n, static_cast<Index>(small.size()));
  out.mu_S.resize(static_cast<Index>(small.size()));
  out.Q_L.resize(n, static_cast<Index>(large.size()));
  out.mu_L.resize(static_cast<Index>(large.size()));
  for (std::size_t c = 0; c < small.size(); ++c)
  {
    out.Q_S.col(c) = eig.vectors.col(small[c]);
    out.mu_S(c) = eig.values(small[c]);
  }
  for (std::size_t c = 0; c < large.size(); ++c)
  {
    out.Q_L.col(c) = eig.vectors.col(large[c]);
    out.mu_L(c) = eig.values(large[c]);
  }
  return out;
}

RealMatrix mode_inverse_B(const ModeSplit &split)
{
  return split.Q_L * split.mu_L.cwiseInverse().asDiagonal() * split.Q_L.transpose();
}

RealMatrix mode_inverse_H(const ModeSplit &split)
{
  return split.Q_L * split.Q_L.transpose();
}

ComplexVector real_times(const RealMatrix &A, const ComplexVector &x)
{
  const RealVector re = A * x.real();
  const RealVector im = A * x.imag();
  ComplexVector out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

ComplexVector local_solve_modes(const ModeSplit &split, const ComplexVector &rhs)
{
  const ComplexVector c = real_times(split.Q_L.transpose(), rhs);
  return real_times(split.Q_L, c.cwiseQuotient(split.mu_L.cast<Complex>()));
}

ComplexVector local_solve_saddle(const LocalOperators &local, const ModeSplit &split,
                                 const ComplexVector &rhs)
{
  const Index n = local.num_interior();
  const Index ks = split.num_small();
  const RealMatrix HQ = local.H_II * split.Q_S;
  ComplexMatrix K = ComplexMatrix::Zero(n + ks, n + ks);
  K.topLeftCorner(n, n) = local.B_II.cast<Complex>();
  K.topRightCorner(n, ks) = HQ.cast<Complex>();
  K.bottomLeftCorner(ks, n) = HQ.transpose().cast<Complex>();
  ComplexVector b = ComplexVector::Zero(n + ks);
  b.head(n) = rhs;
  return ldlt_solve(K, b).head(n);
}

ComplexMatrix schur_hat_B(const LocalOperators &local, const ModeSplit &split)
{
  const RealMatrix BL = mode_inverse_B(split);
  const RealMatrix corr = local.B_gI * BL * local.B_Ig;
  return local.B_gg - corr.cast<Complex>();
}

RealMatrix schur_hat_H(const LocalOperators &local, const ModeSplit &split)
{
  const RealMatrix HL = mode_inverse_H(split);
  RealMatrix out = local.H_gg - local.H_gI * HL * local.H_Ig;
  return 0.5 * (out + out.transpose());
}

Substructure::Substructure(Mesh mesh, Decomposition dec, double k, double beta)
  : mesh_(std::move(mesh)), dec_(std::move(dec)), k_(k), beta_(beta),
    counter_(std::make_shared<std::atomic<std::size_t>>(0))
{
  if (!(k > 0.0))
  {
    throw ConfigError("wavenumber k must be positive");
  }
  if (!(beta > 0.0 && beta < 1.0))
  {
    throw ConfigError("beta must lie in (0, 1)");
  }
  const int N = dec_.num_subdomains();
  subs_.resize(N);
  alpha_offset_.resize(N);
  Index offset = dec_.num_gamma();
  for (int i = 0; i < N; ++i)
  {
    SubdomainData &d = subs_[i];
    const Subdomain &s = dec_.subdomains[i];
    d.local = assemble_local(mesh_, dec_, i, k);
    d.split = interior_modes(d.local, beta);
    d.B_L = mode_inverse_B(d.split);
    d.H_L = mode_inverse_H(d.split);
    d.B_hat = schur_hat_B(d.local, d.split);
    d.H_hat = schur_hat_H(d.local, d.split);

    const Index ng = d.num_gamma(), ks = d.num_small();
    const RealMatrix &QS = d.split.Q_S;
    d.B0.resize(ng + ks, ng + ks);
    d.B0.topLeftCorner(ng, ng) = d.B_hat;
    d.B0.topRightCorner(ng, ks) = (d.local.B_gI * QS).cast<Complex>();
    d.B0.bottomLeftCorner(ks, ng) = (QS.transpose() * d.local.B_Ig).cast<Complex>();
    d.B0.bottomRightCorner(ks, ks) = (QS.transpose() * d.local.B_II * QS).cast<Complex>();
    // Products above agree with their transposes only to roundoff.
    d.B0 = (0.5 * (d.B0 + d.B0.transpose())).eval();

    d.H0.resize(ng + ks, ng + ks);
    d.H0.topLeftCorner(ng, ng) = d.H_hat;
    d.H0.topRightCorner(ng, ks) = d.local.H_gI * QS;
    d.H0.bottomLeftCorner(ks, ng) = QS.transpose() * d.local.H_Ig;
    d.H0.bottomRightCorner(ks, ks) = QS.transpose() * d.local.H_II * QS;
    d.H0 = (0.5 * (d.H0 + d.H0.transpose())).eval();

    alpha_offset_[i] = offset;
    d.coarse_index.resize(ng + ks);
    for (Index p = 0; p < ng; ++p)
    {
      d.coarse_index[p] = dec_.gamma_slot(s, p);
    }
    for (Index j = 0; j < ks; ++j)
    {
      d.coarse_index[ng + j] = offset + j;
    }
    offset += ks;
  }
  coarse_dim_ = offset;

  std::vector<ComplexTriplet> trips;
  for (const SubdomainData &d : subs_)
  {
    for (Index c = 0; c < d.coarse_size(); ++c)
    {
      for (Index r = 0; r < d.coarse_size(); ++r)
      {
        if (d.B0(r, c) != Complex(0.0))
        {
          trips.emplace_back(d.coarse_index[r], d.coarse_index[c], d.B0(r, c));
        }
      }
    }
  }
  B0_.resize(coarse_dim_, coarse_dim_);
  B0_.setFromTriplets(trips.begin(), trips.end());
  B0_.makeCompressed();
}

RealSparse Substructure::H0_assembled() const
{
  std::vector<RealTriplet> trips;
  for (const SubdomainData &d : subs_)
  {
    for (Index c = 0; c < d.coarse_size(); ++c)
    {
      for (Index r = 0; r < d.coarse_size(); ++r)
      {
        if (d.H0(r, c) != 0.0)
        {
          trips.emplace_back(d.coarse_index[r], d.coarse_index[c], d.H0(r, c));
        }
      }
    }
  }
  RealSparse H0(coarse_dim_, coarse_dim_);
  H0.setFromTriplets(trips.begin(), trips.end());
  return H0;
}

ComplexVector Substructure::gather_gamma(int i, const ComplexVector &vec) const
{
  const Subdomain &s = dec_.subdomains[i];
  ComplexVector out(static_cast<Index>(s.gamma.size()));
  for (Index p = 0; p < out.size(); ++p)
  {
    out(p) = vec(dec_.gamma_slot(s, p));
  }
  return out;
}

ComplexVector Substructure::gather_interior(int i, const ComplexVector &fine) const
{
  const Subdomain &s = dec_.subdomains[i];
  ComplexVector out(static_cast<Index>(s.interior.size()));
  for (Index p = 0; p < out.size(); ++p)
  {
    out(p) = fine(dec_.interior_slot(s, p));
  }
  return out;
}

ComplexVector Substructure::gather_coarse(int i, const ComplexVector &coarse) const
{
  const SubdomainData &d = subs_[i];
  ComplexVector out(d.coarse_size());
  for (Index p = 0; p < out.size(); ++p)
  {
    out(p) = coarse(d.coarse_index[p]);
  }
  return out;
}

void Substructure::scatter_coarse_add(int i, const ComplexVector &local,
                                      ComplexVector &coarse) const
{
  const SubdomainData &d = subs_[i];
  for (Index p = 0; p < local.size(); ++p)
  {
    coarse(d.coarse_index[p]) += local(p);
  }
}

ComplexVector Substructure::local_solve(int i, const ComplexVector &rhs_I) const
{
  counter_->fetch_add(1);
  return real_times(subs_[i].B_L, rhs_I);
}

ComplexVector Substructure::apply_R0T(const ComplexVector &u0) const
{
  const Index ng = num_gamma();
  ComplexVector out = ComplexVector::Zero(dec_.num_dofs());
  out.head(ng) = u0.head(ng);
  for (int i = 0; i < num_subdomains(); ++i)
  {
    const SubdomainData &d = subs_[i];
    const Subdomain &s = dec_.subdomains[i];
    const ComplexVector ug = gather_gamma(i, u0);
    ComplexVector ui = -local_solve(i, real_times(d.local.B_Ig, ug));
    if (d.num_small() > 0)
    {
      ui += real_times(d.split.Q_S, u0.segment(alpha_offset_[i], d.num_small()));
    }
    for (Index p = 0; p < ui.size(); ++p)
    {
      out(dec_.interior_slot(s, p)) = ui(p);
    }
  }
  return out;
}

ComplexVector Substructure::apply_R0(const ComplexVector &v) const
{
  const Index ng = num_gamma();
  ComplexVector out = ComplexVector::Zero(coarse_dim_);
  out.head(ng) = v.head(ng);
  for (int i = 0; i < num_subdomains(); ++i)
  {
    const SubdomainData &d = subs_[i];
    const Subdomain &s = dec_.subdomains[i];
    const ComplexVector vi = gather_interior(i, v);
    const ComplexVector g = real_times(d.local.B_gI, local_solve(i, vi));
    for (Index p = 0; p < g.size(); ++p)
    {
      out(dec_.gamma_slot(s, p)) -= g(p);
    }
    if (d.num_small() > 0)
    {
      out.segment(alpha_offset_[i], d.num_small()) = real_times(d.split.Q_S.transpose(), vi);
    }
  }
  return out;
}

ComplexVector Substructure::apply_H0T(const ComplexVector &u0) const
{
  const Index ng = num_gamma();
  ComplexVector out = ComplexVector::Zero(dec_.num_dofs());
  out.head(ng) = u0.head(ng);
  for (int i = 0; i < num_subdomains(); ++i)
  {
    const SubdomainData &d = subs_[i];
    const Subdomain &s = dec_.subdomains[i];
    const ComplexVector ug = gather_gamma(i, u0);
    ComplexVector ui = -real_times(d.H_L, real_times(d.local.H_Ig, ug));
    if (d.num_small() > 0)
    {
      ui += real_times(d.split.Q_S, u0.segment(alpha_offset_[i], d.num_small()));
    }
    for (Index p = 0; p < ui.size(); ++p)
    {
      out(dec_.interior_slot(s, p)) = ui(p);
    }
  }
  return out;
}

Substructure::Decomposed Substructure::decompose(const ComplexVector &v) const
{
  const Index ng = num_gamma();
  Decomposed out;
  out.v0 = ComplexVector::Zero(coarse_dim_);
  out.v0.head(ng) = v.head(ng);
  out.v_i.resize(num_subdomains());
  for (int i = 0; i < num_subdomains(); ++i)
  {
    const SubdomainData &d = subs_[i];
    const ComplexVector vg = gather_gamma(i, v);
    const ComplexVector vi = gather_interior(i, v);
    if (d.num_small() > 0)
    {
      out.v0.segment(alpha_offset_[i], d.num_small()) =
          real_times(d.split.Q_S.transpose(), real_times(d.local.H_II, vi));
    }
    out.v_i[i] =
        real_times(d.B_L, real_times(d.local.B_Ig, vg) + real_times(d.local.B_II, vi));
  }
  return out;
}

ComplexVector Substructure::recompose(const Decomposed &parts) const
{
  ComplexVector out = apply_R0T(parts.v0);
  for (int i = 0; i < num_subdomains(); ++i)
  {
    const Subdomain &s = dec_.subdomains[i];
    for (Index p = 0; p < parts.v_i[i].size(); ++p)
    {
      out(dec_.interior_slot(s, p)) += parts.v_i[i](p);
    }
  }
  return out;
}

ComplexVector Substructure::exact_solve(const ComplexVector &l) const
{
  if (!B0_solver_)
  {
    B0_solver_ = sparse_lu_solver(B0_);
  }
  ComplexVector u = apply_R0T(B0_solver_(apply_R0(l)));
  for (int i = 0; i < num_subdomains(); ++i)
  {
    const Subdomain &s = dec_.subdomains[i];
    const ComplexVector ui = local_solve(i, gather_interior(i, l));
    for (Index p = 0; p < ui.size(); ++p)
    {
      u(dec_.interior_slot(s, p)) += ui(p);
    }
  }
  return u;
}

}  // namespace nosas
