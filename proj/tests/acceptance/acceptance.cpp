// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "nosas/assemble.hpp"
#include "nosas/densela.hpp"
#include "nosas/driver.hpp"
#include "nosas/krylov.hpp"
#include "nosas/precond.hpp"
#include "nosas/spectra.hpp"
#include "nosas/substructure.hpp"
#include "oracles.hpp"

using namespace nosas;
using nosas::oracle::max_abs;
using nosas::oracle::random_complex;
using Clock = std::chrono::steady_clock;

namespace
{

struct Small
{
  double k;
  int inv_h, inv_H;
};

const Small kConfigs[] = {{10, 16, 4}, {20, 32, 4}, {20, 32, 8}};

struct Outcome
{
  bool pass = true;
  std::string detail;
};

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

Substructure make(const Small &c, double beta = 0.01)
{
  Mesh m = build_mesh(c.inv_h);
  Decomposition d = build_decomposition(m, c.inv_H);
  return Substructure(std::move(m), std::move(d), c.k, beta);
}

std::vector<SubdomainSpectra> spectra(const Substructure &s, PrecondKind kind, double er, double ei)
{
  SpectraOptions o;
  o.kind = kind;
  o.eta_re = er;
  o.eta_im = ei;
  return compute_spectra(s, o);
}

double seconds(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome exact_solver_identity()
{
  Outcome o;
  double worst = 0, slowest = 0;
  std::uint64_t seed = 100;
  for (const Small &c : kConfigs)
  {
    const auto t0 = Clock::now();
    const Substructure s = make(c);
    const GlobalSystem sys = assemble_global(s.mesh(), s.decomposition(), c.k);
    const ComplexVector l = random_complex(sys.B.rows(), seed++);
    const ComplexVector ref = ComplexMatrix(sys.B).partialPivLu().solve(l);
    const double err = (s.exact_solve(l) - ref).norm() / ref.norm();
    const double t = seconds(t0);
    worst = std::max(worst, err);
    slowest = std::max(slowest, t);
    o.pass = o.pass && err <= 1e-8 && t < 30.0;
  }
  o.detail = "max rel err " + sci(worst) + " (<= 1e-8), slowest config " + sci(slowest) + " s (< 30)";
  return o;
}

Outcome direct_solver_limit()
{
  Outcome o;
  double worst = 0;
  int max_it = 0;
  for (const Small &c : kConfigs)
  {
    const Substructure s = make(c);
    const ComplexMatrix B0(s.B0());
    for (PrecondKind k : {PrecondKind::P2, PrecondKind::P4})
    {
      const Preconditioner P(s, spectra(s, k, 0.0, 0.0), k);
      const double dev = max_abs(ComplexMatrix(P.bp().dense() - B0)) / max_abs(B0);
      const GmresReport g =
          gmres([&](const ComplexVector &x) -> ComplexVector { return s.B0() * x; },
                [&](const ComplexVector &x) { return P.apply_coarse_inverse(x); },
                random_complex(s.coarse_dim(), 7), 1e-6, 20);
      worst = std::max(worst, dev);
      max_it = std::max(max_it, g.iterations);
      o.pass = o.pass && dev <= 1e-9 && g.converged && g.iterations <= 2;
    }
  }
  o.detail = "max |B_P - B0|/|B0| " + sci(worst) + " (<= 1e-9), max GMRES its " +
             std::to_string(max_it) + " (<= 2)";
  return o;
}

Outcome woodbury_equivalence()
{
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dn(10, 100), dr(0, 10);
  double worst = 0;
  for (int t = 0; t < 50; ++t)
  {
    const Index n = dn(rng), r1 = dr(rng), r2 = dr(rng);
    const std::uint64_t s = 1000 + 10 * t;
    const ComplexMatrix A =
        oracle::random_complex_matrix(n, n, s) + 3.0 * std::sqrt(double(n)) * ComplexMatrix::Identity(n, n);
    const ComplexMatrix U1 = oracle::random_complex_matrix(n, r1, s + 1), V1 = oracle::random_complex_matrix(r1, n, s + 2);
    const ComplexMatrix U2 = oracle::random_complex_matrix(n, r2, s + 3), V2 = oracle::random_complex_matrix(r2, n, s + 4);
    auto lu = std::make_shared<Eigen::PartialPivLU<ComplexMatrix>>(A);
    const WoodburyOperator w = woodbury_build(
        [lu](const ComplexVector &x) -> ComplexVector { return lu->solve(x); }, U1, V1, U2, V2);
    const ComplexMatrix inv = (A - U1 * V1 - U2 * V2).partialPivLu().inverse();
    const ComplexVector x = random_complex(n, s + 5);
    const ComplexVector ref = inv * x;
    worst = std::max(worst, (w.apply(x) - ref).norm() / ref.norm());
  }
  const Substructure sub = make(kConfigs[0]);
  const auto sp = spectra(sub, PrecondKind::P1, 0.4, 0.9);
  const ComplexMatrix ref = reference_bp_dense(sub, sp, PrecondKind::P1);
  const double dual = max_abs(ComplexMatrix(build_bp(sub, sp, PrecondKind::P1).dense() - ref)) / max_abs(ref);
  o.pass = worst <= 1e-10 && dual <= 1e-10;
  o.detail = "50 random instances max rel err " + sci(worst) + " (<= 1e-10); P1 dual assembly " +
             sci(dual) + " (<= 1e-10)";
  return o;
}

Outcome spectral_invariants()
{
  Outcome o;
  PairDeviations w;
  int pairs = 0;
  for (const Small &c : kConfigs)
  {
    const Substructure s = make(c);
    for (PrecondKind k : {PrecondKind::P1, PrecondKind::P2, PrecondKind::P3, PrecondKind::P4})
    {
      for (double eta_im : {0.9, 0.5})
      {
        for (const auto &x : spectra(s, k, 0.4, eta_im))
        {
          for (const ProjectorPair *p : {&x.re, &x.im})
          {
            const PairDeviations d = measure_pair(*p);
            w.orthonormality = std::max(w.orthonormality, d.orthonormality);
            w.idempotency = std::max(w.idempotency, d.idempotency);
            w.cross_stage = std::max(w.cross_stage, d.cross_stage);
            w.metric_orthogonality = std::max(w.metric_orthogonality, d.metric_orthogonality);
            w.band_excess = std::max(w.band_excess, d.band_excess);
            ++pairs;
          }
        }
      }
    }
  }
  o.pass = w.orthonormality <= 1e-9 && w.idempotency <= 1e-9 && w.cross_stage <= 1e-9 &&
           w.metric_orthogonality <= 1e-9 && w.band_excess <= 1e-9;
  o.detail = std::to_string(pairs) + " pairs; orthonormality " + sci(w.orthonormality) +
             ", idempotency " + sci(w.idempotency) + ", stage product " + sci(w.cross_stage) +
             ", metric orthogonality " + sci(w.metric_orthogonality) + ", band excess " +
             sci(w.band_excess) + " (all <= 1e-9)";
  return o;
}

Outcome decomposition_identities()
{
  Outcome o;
  double rec = 0, form = 0;
  std::uint64_t seed = 500;
  for (const Small &c : kConfigs)
  {
    const Substructure s = make(c);
    const GlobalSystem sys = assemble_global(s.mesh(), s.decomposition(), c.k);
    for (int t = 0; t < 20; ++t)
    {
      const ComplexVector v = random_complex(sys.B.rows(), seed++);
      rec = std::max(rec, (s.recompose(s.decompose(v)) - v).norm() / v.norm());
      const ComplexVector u0 = random_complex(s.coarse_dim(), seed++);
      const ComplexVector v0 = random_complex(s.coarse_dim(), seed++);
      const ComplexVector BU = sys.B * s.apply_R0T(u0);
      const ComplexVector V = s.apply_R0T(v0);
      const Complex fine = V.dot(BU), coarse = v0.dot(s.B0() * u0);
      form = std::max(form, std::abs(fine - coarse) / (V.norm() * BU.norm()));
    }
  }
  o.pass = rec <= 1e-11 && form <= 1e-10;
  o.detail = "reconstruction " + sci(rec) + " (<= 1e-11), quadratic form " + sci(form) + " (<= 1e-10)";
  return o;
}

// Published reference cells, "iterations(count)", rows h = 1/32, 1/64; columns H = 1/2..1/16.
struct RefCell
{
  int it, count;
};
const RefCell kRefP4[2][4] = {{{10, 17}, {10, 8}, {9, 4}, {8, 6}}, {{11, 25}, {11, 13}, {11, 9}, {10, 7}}};
const RefCell kRefP1[2][4] = {{{8, 18}, {8, 9}, {7, 4}, {6, 3}}, {{7, 22}, {7, 12}, {6, 8}, {7, 4}}};

struct TableCheck
{
  int within = 0, documented = 0, failed = 0;
  std::vector<RunResult> runs;
  std::string notes;
};

void compare(TableCheck &tc, const RunResult &r, RefCell ref, int tol_it, int tol_count)
{
  tc.runs.push_back(r);
  const int dit = std::abs(r.iterations - ref.it);
  const int dct = std::abs(static_cast<int>(r.eigen.re_max) - ref.count);
  std::ostringstream cell;
  cell << "k=" << r.config.k << " h=1/" << r.config.inv_h << " H=1/" << r.config.inv_H << " "
       << to_string(r.config.kind) << ": " << (r.converged ? std::to_string(r.iterations) : "DNF")
       << "(" << r.eigen.re_max << ") vs " << ref.it << "(" << ref.count << ")";
  if (!r.converged || dit > 6 || dct > 6)
  {
    ++tc.failed;
    tc.notes += "  drift beyond 6: " + cell.str() + "\n";
  }
  else if (dit > tol_it || dct > tol_count)
  {
    ++tc.documented;
    tc.notes += "  outside tolerance (documented): " + cell.str() + "\n";
  }
  else
  {
    ++tc.within;
  }
}

Outcome table_reproduction(TableCheck &tc, bool properties_ok)
{
  const std::vector<int> rows = {32, 64}, cols = {2, 4, 8, 16};
  for (PrecondKind kind : {PrecondKind::P4, PrecondKind::P1})
  {
    ExperimentConfig base;
    base.k = 20;
    base.kind = kind;
    base.eta_re = 0.4;
    base.eta_im = 0.9;
    const Table t = run_table(base, rows, cols);
    write_table_markdown(t, std::cout);
    std::cout << '\n';
    const auto &ref = kind == PrecondKind::P4 ? kRefP4 : kRefP1;
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c) compare(tc, t.at(r, c).result, ref[r][c], 3, 3);
  }

  ExperimentConfig spot;
  spot.k = 50;
  spot.inv_h = 256;
  spot.inv_H = 16;
  spot.kind = PrecondKind::P4;
  spot.eta_re = 0.2;
  spot.eta_im = 0.9;
  const auto t0 = Clock::now();
  const RunResult r = run(spot);
  const double t = seconds(t0);
  compare(tc, r, {9, 17}, 3, 4);
  std::cout << "spot cell k=50 h=1/256 H=1/16 eta_re=0.2: " << r.iterations << "(" << r.eigen.re_max
            << ") in " << sci(t) << " s\n\n";

  Outcome o;
  o.pass = tc.failed == 0 && t <= 600.0 && (tc.documented == 0 || properties_ok);
  o.detail = std::to_string(tc.within) + " cells within tolerance, " + std::to_string(tc.documented) +
             " documented discrepancies, " + std::to_string(tc.failed) + " failures; spot cell " +
             sci(t) + " s (<= 600)";
  if (!tc.notes.empty()) o.detail += "\n" + tc.notes;
  return o;
}

Outcome algorithm_contract(const TableCheck &tc)
{
  Outcome o;
  double worst = 0;
  int bad_count = 0;
  std::string over;
  for (const RunResult &r : tc.runs)
  {
    if (r.local_solves != 2u * static_cast<std::size_t>(r.num_subdomains)) ++bad_count;
    if (!r.converged) continue;
    const double ratio = r.fine_relative_residual / r.config.tol;
    worst = std::max(worst, ratio);
    if (ratio > 10.0)
      over += "\n  over: k=" + sci(r.config.k) + " " + to_string(r.config.kind) + " h=1/" +
              std::to_string(r.config.inv_h) + " H=1/" + std::to_string(r.config.inv_H) +
              " fine residual / tol " + sci(ratio);
  }
  o.pass = bad_count == 0 && worst <= 10.0 && !tc.runs.empty();
  o.detail = std::to_string(tc.runs.size()) + " runs; local-solve count != 2N in " +
             std::to_string(bad_count) + "; max fine residual / tol " + sci(worst) + " (<= 10)" + over;
  return o;
}

Outcome discretization_sanity()
{
  Outcome o;
  const double k = 5;
  double prev = INFINITY;
  std::string errs;
  for (int n : {8, 16, 32})
  {
    const Mesh m = build_mesh(n);
    const Decomposition d = build_decomposition(m, 2);
    const GlobalSystem sys = assemble_global(m, d, k);
    const ComplexVector u = sparse_lu_solver(sys.B)(sys.rhs);
    const double e = (to_node_ordering(d, u) - plane_wave(m, k)).cwiseAbs().maxCoeff();
    o.pass = o.pass && e < prev;
    prev = e;
    errs += (errs.empty() ? "" : ", ") + std::string("h=1/") + std::to_string(n) + ": " + sci(e);
  }
  o.pass = o.pass && prev <= 0.05;
  o.detail = "max nodal error " + errs + " (decreasing, <= 0.05 at h=1/32)";
  return o;
}

void report(int n, const char *name, const Outcome &o, bool &all)
{
  std::cout << "criterion " << n << " [" << name << "]: " << (o.pass ? "PASS" : "FAIL") << "  "
            << o.detail << std::endl;
  all = all && o.pass;
}

}  // namespace

int main()
{
  bool all = true;
  const Outcome c1 = exact_solver_identity();
  const Outcome c2 = direct_solver_limit();
  const Outcome c3 = woodbury_equivalence();
  const Outcome c4 = spectral_invariants();
  const Outcome c6 = decomposition_identities();
  const bool properties = c1.pass && c2.pass && c3.pass && c4.pass && c6.pass;
  TableCheck tc;
  const Outcome c5 = table_reproduction(tc, properties);
  const Outcome c7 = algorithm_contract(tc);
  const Outcome c8 = discretization_sanity();

  report(1, "exact-solver identity", c1, all);
  report(2, "direct-solver limit", c2, all);
  report(3, "low-rank update equivalence", c3, all);
  report(4, "spectral invariants", c4, all);
  report(5, "table reproduction", c5, all);
  report(6, "decomposition and quadratic-form identities", c6, all);
  report(7, "two-local-solve contract", c7, all);
  report(8, "discretization sanity", c8, all);
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
