// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_SPECTRA_HPP
#define NOSAS_SPECTRA_HPP

#include <string>
#include <vector>

#include "nosas/assemble.hpp"
#include "nosas/substructure.hpp"
#include "nosas/types.hpp"

namespace nosas
{

enum class PrecondKind
{
  P1,
  P2,
  P3,
  P4,
  Exact
};

std::string to_string(PrecondKind kind);
PrecondKind parse_precond_kind(const std::string &name);  // p1..p4, exact; throws ConfigError

enum class Part
{
  Real,
  Imaginary
};

// Selection rule: lambda < 1 - eta or lambda > upper, upper = 1 + eta (or 2 with cutoff_2).
bool outside_band(double lambda, double eta, bool cutoff_2 = false);

//
// Selected basis for one subdomain and one part, in local coarse coordinates (Gamma_i then
// alpha_i). Pi = Q Q^T metric is the associated projector.
//   two_stage == true : D is the full correction matrix (C0 - Re B0, or C_Diag - Im B0).
//   two_stage == false: D is diag(1 - lambda) in the selected space.
//
struct ProjectorPair
{
  int subdomain = 0;
  Part part = Part::Real;
  bool two_stage = false;
  double eta = 0.0;
  bool cutoff_2 = false;

  RealMatrix Q;
  RealVector lambdas;
  RealMatrix metric;
  RealMatrix D;

  Index stage1_count = 0;
  Index stage2_count = 0;

  // Unselected directions, with the pencil they were tested against (for band checks).
  RealMatrix rejected1, rejected1_lhs;
  RealMatrix rejected2, rejected2_lhs;

  Index size() const { return Q.cols(); }
  RealMatrix projector() const { return Q * Q.transpose() * metric; }
};

// Two-stage selection on (Re B0, H0) followed by (C0, H0) on the stage-1 complement.
ProjectorPair select_p1_real(int subdomain, const RealMatrix &ReB0, const RealMatrix &H0,
                             const RealMatrix &C0, double eta, bool cutoff_2 = false);

// One-stage selection on (Re B0, C0).
ProjectorPair select_p2_real(int subdomain, const RealMatrix &ReB0, const RealMatrix &C0,
                             double eta, bool cutoff_2 = false);

//
// Imaginary side, posed on the Pi_i block and embedded by zero into the coarse coordinates.
// ImB_pipi is Im B_gg restricted to Pi_i; pi holds the Pi_i positions within Gamma_i.
//
ProjectorPair select_p3_imag(int subdomain, const RealMatrix &ImB_pipi, const RealMatrix &S_pipi,
                             const RealVector &c_diag, const std::vector<Index> &pi,
                             Index coarse_size, double h, double k, double eta);

ProjectorPair select_p4_imag(int subdomain, const RealMatrix &ImB_pipi, const RealVector &c_diag,
                             const std::vector<Index> &pi, Index coarse_size, double eta);

// Measured deviations of a built pair from its defining identities (0 in exact arithmetic,
// except band_excess which is 0 whenever every unselected Rayleigh quotient is in the band).
struct PairDeviations
{
  double orthonormality = 0.0;        // max |Q^T M Q - I|
  double idempotency = 0.0;           // max |Pi^2 - Pi|
  double cross_stage = 0.0;           // max |Pi_1 Pi_2|
  double metric_orthogonality = 0.0;  // max |Pi^T M (I - Pi)| / max |M|
  double band_excess = 0.0;           // distance of unselected Rayleigh quotients outside the band
};

PairDeviations measure_pair(const ProjectorPair &pair);

// Block-diagonal C0 on the local coarse space: diag(C0_gg, Q_S^T H_II Q_S).
RealMatrix coarse_C0(const SubdomainData &sub, const CoarseAux &aux);

struct SpectraOptions
{
  PrecondKind kind = PrecondKind::P4;
  double eta_re = 0.4;
  double eta_im = 0.9;
  bool large_cutoff_2 = false;
};

struct SubdomainSpectra
{
  CoarseAux aux;
  RealMatrix C0;
  RealMatrix ReB0;
  RealMatrix ImB0;     // Im B_gg embedded in the coarse coordinates
  RealMatrix CDiag;    // c_diag embedded in the coarse coordinates
  ProjectorPair re;
  ProjectorPair im;    // empty for P1/P2
};

std::vector<SubdomainSpectra> compute_spectra(const Substructure &sub, const SpectraOptions &opt);

struct EigenCounts
{
  Index re_max = 0, im_max = 0;
  Index re_total = 0, im_total = 0;
  double re_avg = 0.0, im_avg = 0.0;
};

EigenCounts count_selected(const std::vector<SubdomainSpectra> &spectra);

}  // namespace nosas

#endif  // NOSAS_SPECTRA_HPP
