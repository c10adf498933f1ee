// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include "nosas/spectra.hpp"

#include <algorithm>
#include <cctype>

#include "nosas/densela.hpp"

namespace nosas
{

std::string to_string(PrecondKind kind)
{
  switch (kind)
  {
    case PrecondKind::P1: return "p1";
    case PrecondKind::P2: return "p2";
    case PrecondKind::P3: return "p3";
    case PrecondKind::P4: return "p4";
    case PrecondKind::Exact: return "exact";
  }
  return "?";
}

PrecondKind parse_precond_kind(const std::string &name)
{
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "p1") return PrecondKind::P1;
  if (s == "p2") return PrecondKind::P2;
  if (s == "p3") return PrecondKind::P3;
  if (s == "p4") return PrecondKind::P4;
  if (s == "exact") return PrecondKind::Exact;
  throw ConfigError("unknown preconditioner '" + name + "' (expected p1, p2, p3, p4, exact)");
}

bool outside_band(double lambda, double eta, bool cutoff_2)
{
  return lambda < 1.0 - eta || lambda > (cutoff_2 ? 2.0 : 1.0 + eta);
}

namespace
{

void check_eta(double eta)
{
  if (!(eta >= 0.0 && eta <= 1.0))
  {
    throw ConfigError("eta must lie in [0, 1], got " + std::to_string(eta));
  }
}

struct Split
{
  RealMatrix selected, rejected;
  RealVector selected_values;
};

Split split_by_band(const GenEigResult &eig, double eta, bool cutoff_2)
{
  std::vector<Index> sel, rej;
  for (Index j = 0; j < eig.values.size(); ++j)
  {
    (outside_band(eig.values(j), eta, cutoff_2) ? sel : rej).push_back(j);
  }
  Split out;
  const Index n = eig.vectors.rows();
  out.selected.resize(n, static_cast<Index>(sel.size()));
  out.selected_values.resize(static_cast<Index>(sel.size()));
  out.rejected.resize(n, static_cast<Index>(rej.size()));
  for (std::size_t c = 0; c < sel.size(); ++c)
  {
    out.selected.col(c) = eig.vectors.col(sel[c]);
    out.selected_values(c) = eig.values(sel[c]);
  }
  for (std::size_t c = 0; c < rej.size(); ++c)
  {
    out.rejected.col(c) = eig.vectors.col(rej[c]);
  }
  return out;
}

RealMatrix hcat(const RealMatrix &a, const RealMatrix &b)
{
  RealMatrix out(std::max(a.rows(), b.rows()), a.cols() + b.cols());
  out << a, b;
  return out;
}

RealMatrix embed_rows(const RealMatrix &small, const std::vector<Index> &rows, Index n)
{
  RealMatrix out = RealMatrix::Zero(n, small.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
  {
    out.row(rows[r]) = small.row(static_cast<Index>(r));
  }
  return out;
}

RealMatrix embed_square(const RealMatrix &small, const std::vector<Index> &idx, Index n)
{
  RealMatrix out = RealMatrix::Zero(n, n);
  for (std::size_t c = 0; c < idx.size(); ++c)
  {
    for (std::size_t r = 0; r < idx.size(); ++r)
    {
      out(idx[r], idx[c]) = small(static_cast<Index>(r), static_cast<Index>(c));
    }
  }
  return out;
}

}  // namespace

ProjectorPair select_p1_real(int subdomain, const RealMatrix &ReB0, const RealMatrix &H0,
                             const RealMatrix &C0, double eta, bool cutoff_2)
{
  check_eta(eta);
  ProjectorPair out;
  out.subdomain = subdomain;
  out.part = Part::Real;
  out.two_stage = true;
  out.eta = eta;
  out.cutoff_2 = cutoff_2;

  const Split s1 = split_by_band(gen_eig_spd(ReB0, H0), eta, cutoff_2);
  out.stage1_count = s1.selected.cols();
  out.rejected1 = s1.rejected;
  out.rejected1_lhs = ReB0;

  RealMatrix Q2(ReB0.rows(), 0);
  RealVector l2(0);
  if (s1.rejected.cols() > 0)
  {
    const RealMatrix &P = s1.rejected;
    const Split s2 = split_by_band(gen_eig_spd(P.transpose() * C0 * P, P.transpose() * H0 * P),
                                   eta, cutoff_2);
    Q2 = P * s2.selected;
    l2 = s2.selected_values;
    out.rejected2 = P * s2.rejected;
  }
  else
  {
    out.rejected2.resize(ReB0.rows(), 0);
  }
  out.rejected2_lhs = C0;
  out.stage2_count = Q2.cols();

  out.Q = hcat(s1.selected, Q2);
  out.lambdas.resize(out.Q.cols());
  out.lambdas << s1.selected_values, l2;
  out.metric = H0;
  out.D = C0 - ReB0;
  return out;
}

ProjectorPair select_p2_real(int subdomain, const RealMatrix &ReB0, const RealMatrix &C0,
                             double eta, bool cutoff_2)
{
  check_eta(eta);
  ProjectorPair out;
  out.subdomain = subdomain;
  out.part = Part::Real;
  out.eta = eta;
  out.cutoff_2 = cutoff_2;
  const Split s = split_by_band(gen_eig_spd(ReB0, C0), eta, cutoff_2);
  out.Q = s.selected;
  out.lambdas = s.selected_values;
  out.stage1_count = s.selected.cols();
  out.rejected1 = s.rejected;
  out.rejected1_lhs = ReB0;
  out.rejected2.resize(ReB0.rows(), 0);
  out.metric = C0;
  out.D = (RealVector::Ones(s.selected_values.size()) - s.selected_values).asDiagonal();
  return out;
}

namespace
{

ProjectorPair empty_pair(int subdomain, Part part, Index n, double eta, bool two_stage)
{
  ProjectorPair out;
  out.subdomain = subdomain;
  out.part = part;
  out.two_stage = two_stage;
  out.eta = eta;
  out.Q.resize(n, 0);
  out.lambdas.resize(0);
  out.metric = RealMatrix::Zero(n, n);
  out.D = two_stage ? RealMatrix::Zero(n, n) : RealMatrix(0, 0);
  out.rejected1.resize(n, 0);
  out.rejected2.resize(n, 0);
  return out;
}

}  // namespace

ProjectorPair select_p3_imag(int subdomain, const RealMatrix &ImB_pipi, const RealMatrix &S_pipi,
                             const RealVector &c_diag, const std::vector<Index> &pi,
                             Index coarse_size, double h, double k, double eta)
{
  check_eta(eta);
  if (pi.empty())
  {
    return empty_pair(subdomain, Part::Imaginary, coarse_size, eta, true);
  }
  const RealMatrix metric = (h * k) * S_pipi;
  const RealMatrix Cd = c_diag.asDiagonal();

  ProjectorPair out;
  out.subdomain = subdomain;
  out.part = Part::Imaginary;
  out.two_stage = true;
  out.eta = eta;

  const Split s1 = split_by_band(gen_eig_spd(ImB_pipi, metric), eta, false);
  out.stage1_count = s1.selected.cols();
  RealMatrix Q2(ImB_pipi.rows(), 0);
  RealVector l2(0);
  RealMatrix rej2(ImB_pipi.rows(), 0);
  if (s1.rejected.cols() > 0)
  {
    const RealMatrix &P = s1.rejected;
    const Split s2 =
        split_by_band(gen_eig_spd(P.transpose() * Cd * P, P.transpose() * metric * P), eta, false);
    Q2 = P * s2.selected;
    l2 = s2.selected_values;
    rej2 = P * s2.rejected;
  }
  out.stage2_count = Q2.cols();

  const RealMatrix Qpi = hcat(s1.selected, Q2);
  out.Q = embed_rows(Qpi, pi, coarse_size);
  out.lambdas.resize(Qpi.cols());
  out.lambdas << s1.selected_values, l2;
  out.metric = embed_square(metric, pi, coarse_size);
  out.D = embed_square(Cd - ImB_pipi, pi, coarse_size);
  out.rejected1 = embed_rows(s1.rejected, pi, coarse_size);
  out.rejected1_lhs = embed_square(ImB_pipi, pi, coarse_size);
  out.rejected2 = embed_rows(rej2, pi, coarse_size);
  out.rejected2_lhs = embed_square(Cd, pi, coarse_size);
  return out;
}

ProjectorPair select_p4_imag(int subdomain, const RealMatrix &ImB_pipi, const RealVector &c_diag,
                             const std::vector<Index> &pi, Index coarse_size, double eta)
{
  check_eta(eta);
  if (pi.empty())
  {
    return empty_pair(subdomain, Part::Imaginary, coarse_size, eta, false);
  }
  const RealMatrix Cd = c_diag.asDiagonal();
  const Split s = split_by_band(gen_eig_spd(ImB_pipi, Cd), eta, false);
  ProjectorPair out;
  out.subdomain = subdomain;
  out.part = Part::Imaginary;
  out.eta = eta;
  out.Q = embed_rows(s.selected, pi, coarse_size);
  out.lambdas = s.selected_values;
  out.stage1_count = s.selected.cols();
  out.metric = embed_square(Cd, pi, coarse_size);
  out.D = (RealVector::Ones(s.selected_values.size()) - s.selected_values).asDiagonal();
  out.rejected1 = embed_rows(s.rejected, pi, coarse_size);
  out.rejected1_lhs = embed_square(ImB_pipi, pi, coarse_size);
  out.rejected2.resize(coarse_size, 0);
  return out;
}

PairDeviations measure_pair(const ProjectorPair &pair)
{
  PairDeviations dev;
  const Index n = pair.metric.rows();
  if (pair.size() > 0)
  {
    const RealMatrix &Q = pair.Q, &M = pair.metric;
    dev.orthonormality =
        (Q.transpose() * M * Q - RealMatrix::Identity(Q.cols(), Q.cols())).cwiseAbs().maxCoeff();
    const RealMatrix P = pair.projector();
    dev.idempotency = (P * P - P).cwiseAbs().maxCoeff();
    const double mmax = M.cwiseAbs().maxCoeff();
    dev.metric_orthogonality =
        (P.transpose() * M * (RealMatrix::Identity(n, n) - P)).cwiseAbs().maxCoeff() /
        (mmax > 0.0 ? mmax : 1.0);
    const Index k1 = pair.stage1_count, k2 = pair.size() - pair.stage1_count;
    if (k1 > 0 && k2 > 0)
    {
      const RealMatrix Q1 = Q.leftCols(k1), Q2 = Q.rightCols(k2);
      const RealMatrix P1 = Q1 * Q1.transpose() * M, P2 = Q2 * Q2.transpose() * M;
      dev.cross_stage = (P1 * P2).cwiseAbs().maxCoeff();
    }
  }
  const double lo = 1.0 - pair.eta, hi = pair.cutoff_2 ? 2.0 : 1.0 + pair.eta;
  auto band = [&](const RealMatrix &X, const RealMatrix &L) {
    for (Index c = 0; c < X.cols(); ++c)
    {
      const double den = X.col(c).dot(pair.metric * X.col(c));
      if (!(den > 0.0))
      {
        continue;
      }
      const double q = X.col(c).dot(L * X.col(c)) / den;
      dev.band_excess = std::max({dev.band_excess, lo - q, q - hi});
    }
  };
  if (pair.rejected1.cols() > 0)
  {
    band(pair.rejected1, pair.rejected1_lhs);
  }
  if (pair.rejected2.cols() > 0)
  {
    band(pair.rejected2, pair.rejected2_lhs);
  }
  return dev;
}

RealMatrix coarse_C0(const SubdomainData &sub, const CoarseAux &aux)
{
  const Index ng = sub.num_gamma(), ks = sub.num_small();
  RealMatrix C0 = RealMatrix::Zero(ng + ks, ng + ks);
  C0.topLeftCorner(ng, ng) = aux.C0_gg;
  C0.bottomRightCorner(ks, ks) = sub.H0.bottomRightCorner(ks, ks);
  return C0;
}

std::vector<SubdomainSpectra> compute_spectra(const Substructure &sub, const SpectraOptions &opt)
{
  check_eta(opt.eta_re);
  check_eta(opt.eta_im);
  const Decomposition &dec = sub.decomposition();
  std::vector<SubdomainSpectra> out(sub.num_subdomains());
  for (int i = 0; i < sub.num_subdomains(); ++i)
  {
    const SubdomainData &d = sub.subdomain(i);
    const Subdomain &s = dec.subdomains[i];
    SubdomainSpectra &sp = out[i];
    const Index cs = d.coarse_size();
    sp.aux = assemble_coarse_aux(d.local, s, d.H_hat);
    sp.C0 = coarse_C0(d, sp.aux);
    sp.ReB0 = d.B0.real();
    sp.ReB0 = (0.5 * (sp.ReB0 + sp.ReB0.transpose())).eval();
    sp.ImB0 = RealMatrix::Zero(cs, cs);
    sp.ImB0.topLeftCorner(d.num_gamma(), d.num_gamma()) = d.local.Im_B_gg;
    sp.CDiag = RealMatrix::Zero(cs, cs);
    for (std::size_t a = 0; a < s.pi.size(); ++a)
    {
      sp.CDiag(s.pi[a], s.pi[a]) = sp.aux.c_diag(static_cast<Index>(a));
    }

    RealMatrix ImB_pipi(static_cast<Index>(s.pi.size()), static_cast<Index>(s.pi.size()));
    for (std::size_t c = 0; c < s.pi.size(); ++c)
    {
      for (std::size_t r = 0; r < s.pi.size(); ++r)
      {
        ImB_pipi(static_cast<Index>(r), static_cast<Index>(c)) = d.local.Im_B_gg(s.pi[r], s.pi[c]);
      }
    }

    switch (opt.kind)
    {
      case PrecondKind::P1:
        sp.re = select_p1_real(i, sp.ReB0, d.H0, sp.C0, opt.eta_re, opt.large_cutoff_2);
        sp.im = empty_pair(i, Part::Imaginary, cs, opt.eta_im, true);
        break;
      case PrecondKind::P2:
        sp.re = select_p2_real(i, sp.ReB0, sp.C0, opt.eta_re, opt.large_cutoff_2);
        sp.im = empty_pair(i, Part::Imaginary, cs, opt.eta_im, false);
        break;
      case PrecondKind::P3:
        sp.re = select_p1_real(i, sp.ReB0, d.H0, sp.C0, opt.eta_re, opt.large_cutoff_2);
        sp.im = select_p3_imag(i, ImB_pipi, sp.aux.S_pipi, sp.aux.c_diag, s.pi, cs,
                               sub.mesh().h(), sub.k(), opt.eta_im);
        break;
      case PrecondKind::P4:
        sp.re = select_p2_real(i, sp.ReB0, sp.C0, opt.eta_re, opt.large_cutoff_2);
        sp.im = select_p4_imag(i, ImB_pipi, sp.aux.c_diag, s.pi, cs, opt.eta_im);
        break;
      case PrecondKind::Exact:
        sp.re = empty_pair(i, Part::Real, cs, opt.eta_re, false);
        sp.im = empty_pair(i, Part::Imaginary, cs, opt.eta_im, false);
        break;
    }
  }
  return out;
}

EigenCounts count_selected(const std::vector<SubdomainSpectra> &spectra)
{
  EigenCounts c;
  for (const auto &sp : spectra)
  {
    c.re_max = std::max(c.re_max, sp.re.size());
    c.im_max = std::max(c.im_max, sp.im.size());
    c.re_total += sp.re.size();
    c.im_total += sp.im.size();
  }
  if (!spectra.empty())
  {
    c.re_avg = static_cast<double>(c.re_total) / static_cast<double>(spectra.size());
    c.im_avg = static_cast<double>(c.im_total) / static_cast<double>(spectra.size());
  }
  return c;
}

}  // namespace nosas
