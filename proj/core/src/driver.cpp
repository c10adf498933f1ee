// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include "nosas/driver.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/LU>
#include <unsupported/Eigen/SparseExtra>

#include "nosas/assemble.hpp"
#include "nosas/mesh.hpp"
#include "nosas/precond.hpp"
#include "nosas/substructure.hpp"

namespace nosas
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
  {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string &key, const std::string &text)
{
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
  {
    throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string &key, const std::string &text)
{
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
  {
    throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string &key, const std::string &text)
{
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "1" || t == "true" || t == "yes" || t == "on")
  {
    return true;
  }
  if (t == "0" || t == "false" || t == "no" || t == "off")
  {
    return false;
  }
  throw ConfigError("'" + key + "': expected a boolean, got '" + text + "'");
}

int to_int(const std::string &key, long long v)
{
  if (v < INT32_MIN || v > INT32_MAX)
  {
    throw ConfigError("'" + key + "': value out of range");
  }
  return static_cast<int>(v);
}

ComplexVector random_complex(Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> dist;
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i)
  {
    const double re = dist(rng);
    v(i) = Complex(re, dist(rng));
  }
  return v;
}

}  // namespace

void validate(const ExperimentConfig &c)
{
  if (!(c.k > 0.0) || !std::isfinite(c.k))
  {
    throw ConfigError("k must be a positive number");
  }
  if (c.inv_h < 2)
  {
    throw ConfigError("inv-h must be at least 2");
  }
  if (c.inv_H < 2)
  {
    throw ConfigError("inv-H must be at least 2");
  }
  if (c.inv_h % c.inv_H != 0)
  {
    throw ConfigError("inv-H must divide inv-h");
  }
  if (c.inv_h / c.inv_H < 2)
  {
    throw ConfigError("inv-h/inv-H must be at least 2");
  }
  if (!(c.beta > 0.0 && c.beta < 1.0))
  {
    throw ConfigError("beta must lie in (0, 1)");
  }
  if (!(c.eta_re >= 0.0 && c.eta_re <= 1.0))
  {
    throw ConfigError("eta-re must lie in [0, 1]");
  }
  if (!(c.eta_im >= 0.0 && c.eta_im <= 1.0))
  {
    throw ConfigError("eta-im must lie in [0, 1]");
  }
  if (!(c.tol > 0.0 && c.tol < 1.0))
  {
    throw ConfigError("tol must lie in (0, 1)");
  }
  if (c.max_it < 1)
  {
    throw ConfigError("max-it must be at least 1");
  }
}

void apply_config_value(ExperimentConfig &c, const std::string &raw_key, const std::string &value)
{
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "k")
    c.k = parse_double(key, value);
  else if (key == "inv-h")
    c.inv_h = to_int(key, parse_int(key, value));
  else if (key == "inv-H")
    c.inv_H = to_int(key, parse_int(key, value));
  else if (key == "beta")
    c.beta = parse_double(key, value);
  else if (key == "eta-re")
    c.eta_re = parse_double(key, value);
  else if (key == "eta-im")
    c.eta_im = parse_double(key, value);
  else if (key == "precond")
    c.kind = parse_precond_kind(trim(value));
  else if (key == "tol")
    c.tol = parse_double(key, value);
  else if (key == "max-it")
    c.max_it = to_int(key, parse_int(key, value));
  else if (key == "seed")
    c.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "large-cutoff-2")
    c.large_cutoff_2 = parse_bool(key, value);
  else if (key == "export-matrices")
    c.export_matrices = parse_bool(key, value);
  else if (key == "export-dir")
    c.export_dir = trim(value);
  else
    throw ConfigError("unknown configuration key '" + raw_key + "'");
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string &text)
{
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
    {
      line.resize(hash);
    }
    if (trim(line).empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0)
    {
      key = key.substr(2);
    }
    if (key.empty())
    {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

ExperimentConfig load_config_file(const std::string &path, ExperimentConfig base)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  for (const auto &[key, value] : parse_config_text(ss.str()))
  {
    apply_config_value(base, key, value);
  }
  return base;
}

void write_matrix_market(const ComplexSparse &A, const std::string &path)
{
  ComplexSparse compressed = A;
  compressed.makeCompressed();
  if (!Eigen::saveMarket(compressed, path))
  {
    throw ConfigError("cannot write '" + path + "'");
  }
}

RunResult run(const ExperimentConfig &config)
{
  validate(config);
  RunResult res;
  res.config = config;
  const auto t_setup = Clock::now();

  Mesh mesh = build_mesh(config.inv_h);
  Decomposition dec = build_decomposition(mesh, config.inv_H);
  const GlobalSystem sys = assemble_global(mesh, dec, config.k);
  const ComplexVector exact = plane_wave(mesh, config.k);
  const Substructure sub(std::move(mesh), std::move(dec), config.k, config.beta);

  SpectraOptions sopt;
  sopt.kind = config.kind;
  sopt.eta_re = config.eta_re;
  sopt.eta_im = config.eta_im;
  sopt.large_cutoff_2 = config.large_cutoff_2;
  const Preconditioner prec(sub, compute_spectra(sub, sopt), config.kind);

  res.num_subdomains = sub.num_subdomains();
  res.coarse_dim = sub.coarse_dim();
  for (int i = 0; i < sub.num_subdomains(); ++i)
  {
    res.num_small_modes += sub.subdomain(i).num_small();
  }
  res.eigen = count_selected(prec.spectra());
  res.low_rank = prec.bp().rank();
  res.setup_seconds = seconds_since(t_setup);

  if (config.export_matrices)
  {
    namespace fs = std::filesystem;
    fs::create_directories(config.export_dir);
    const auto path = [&](const char *name) { return (fs::path(config.export_dir) / name).string(); };
    write_matrix_market(sys.B, path("B.mtx"));
    res.exported_files.push_back(path("B.mtx"));
    write_matrix_market(sub.B0(), path("B0.mtx"));
    res.exported_files.push_back(path("B0.mtx"));
    if (config.kind != PrecondKind::Exact)
    {
      write_matrix_market(prec.bp().C, path("C.mtx"));
      res.exported_files.push_back(path("C.mtx"));
    }
  }

  const auto t_solve = Clock::now();
  sub.reset_local_solve_count();
  const Decomposition &d = sub.decomposition();
  const Index ng = sub.num_gamma();
  const ComplexVector &l = sys.rhs;

  // Step 1: local solves and the reduced right-hand side r0 = R0 l.
  std::vector<ComplexVector> u_local(sub.num_subdomains());
  ComplexVector r0 = ComplexVector::Zero(sub.coarse_dim());
  r0.head(ng) = l.head(ng);
  for (int i = 0; i < sub.num_subdomains(); ++i)
  {
    const SubdomainData &sd = sub.subdomain(i);
    const ComplexVector lI = sub.gather_interior(i, l);
    u_local[i] = sub.local_solve(i, lI);
    const ComplexVector g = real_times(sd.local.B_gI, u_local[i]);
    const Subdomain &s = d.subdomains[i];
    for (Index p = 0; p < g.size(); ++p)
    {
      r0(d.gamma_slot(s, p)) -= g(p);
    }
    if (sd.num_small() > 0)
    {
      r0.segment(sub.alpha_offset(i), sd.num_small()) = real_times(sd.split.Q_S.transpose(), lI);
    }
  }

  // Step 2: preconditioned GMRES on B0 u0 = r0.
  const ComplexSparse &B0 = sub.B0();
  res.gmres = gmres([&](const ComplexVector &x) -> ComplexVector { return B0 * x; },
                    [&](const ComplexVector &x) { return prec.apply_coarse_inverse(x); }, r0,
                    config.tol, config.max_it);
  res.iterations = res.gmres.iterations;
  res.converged = res.gmres.converged;

  // Step 3: u_h = R0^T u0 + sum R_i^T u_i.
  ComplexVector u = sub.apply_R0T(res.gmres.solution);
  for (int i = 0; i < sub.num_subdomains(); ++i)
  {
    const Subdomain &s = d.subdomains[i];
    for (Index p = 0; p < u_local[i].size(); ++p)
    {
      u(d.interior_slot(s, p)) += u_local[i](p);
    }
  }
  res.local_solves = sub.local_solve_count();
  res.solve_seconds = seconds_since(t_solve);

  res.fine_relative_residual = (sys.B * u - l).norm() / l.norm();
  res.max_nodal_error = (to_node_ordering(d, u) - exact).cwiseAbs().maxCoeff();
  return res;
}

bool Table::all_ok() const
{
  return std::all_of(cells.begin(), cells.end(), [](const TableCell &c) { return c.ok; });
}

Table run_table(const ExperimentConfig &base, const std::vector<int> &inv_h_rows,
                const std::vector<int> &inv_H_cols)
{
  Table t;
  t.base = base;
  t.rows = inv_h_rows;
  t.cols = inv_H_cols;
  for (int ih : inv_h_rows)
  {
    for (int iH : inv_H_cols)
    {
      TableCell cell;
      cell.inv_h = ih;
      cell.inv_H = iH;
      cell.result.config = base;
      cell.result.config.inv_h = ih;
      cell.result.config.inv_H = iH;
      t.cells.push_back(std::move(cell));
    }
  }

  // Cells are independent; results land in fixed slots so output order does not depend on
  // scheduling.
  std::atomic<std::size_t> next{0};
  auto worker = [&]
  {
    for (std::size_t j = next++; j < t.cells.size(); j = next++)
    {
      TableCell &cell = t.cells[j];
      const ExperimentConfig c = cell.result.config;
      try
      {
        cell.result = run(c);
        cell.ok = cell.result.converged;
        if (!cell.ok)
        {
          cell.error = "no convergence in " + std::to_string(c.max_it) + " iterations";
        }
      }
      catch (const std::exception &e)
      {
        cell.error = e.what();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads = std::min(hw, t.cells.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < nthreads; ++w)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &th : pool)
  {
    th.join();
  }
  return t;
}

std::string format_cell(const TableCell &cell)
{
  if (!cell.ok)
  {
    return "DNF";
  }
  return std::to_string(cell.result.iterations) + "(" + std::to_string(cell.result.eigen.re_max) +
         ")";
}

void write_table_markdown(const Table &t, std::ostream &out)
{
  out << "k = " << t.base.k << ", precond = " << to_string(t.base.kind)
      << ", beta = " << t.base.beta << ", eta_re = " << t.base.eta_re
      << ", eta_im = " << t.base.eta_im << "\n\n";
  out << "| h \\ H |";
  for (int c : t.cols)
  {
    out << " 1/" << c << " |";
  }
  out << "\n|---|";
  for (std::size_t c = 0; c < t.cols.size(); ++c)
  {
    out << "---|";
  }
  out << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r)
  {
    out << "| 1/" << t.rows[r] << " |";
    for (std::size_t c = 0; c < t.cols.size(); ++c)
    {
      out << ' ' << format_cell(t.at(r, c)) << " |";
    }
    out << '\n';
  }
}

void write_table_csv(const Table &t, std::ostream &out)
{
  out << "k,inv_h,inv_H,precond,beta,eta_re,eta_im,cell,converged,iterations,eig_re_max,"
         "eig_re_avg,eig_im_max,eig_im_avg,coarse_dim,low_rank,local_solves,"
         "fine_relative_residual,setup_seconds,solve_seconds,error\n";
  out << std::setprecision(10);
  for (const TableCell &cell : t.cells)
  {
    const RunResult &r = cell.result;
    std::string err = cell.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << t.base.k << ',' << cell.inv_h << ',' << cell.inv_H << ',' << to_string(t.base.kind)
        << ',' << t.base.beta << ',' << t.base.eta_re << ',' << t.base.eta_im << ','
        << format_cell(cell) << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << ','
        << r.eigen.re_max << ',' << r.eigen.re_avg << ',' << r.eigen.im_max << ','
        << r.eigen.im_avg << ',' << r.coarse_dim << ',' << r.low_rank << ',' << r.local_solves
        << ',' << r.fine_relative_residual << ',' << r.setup_seconds << ',' << r.solve_seconds
        << ',' << err << '\n';
  }
}

bool VerifyReport::all_passed() const
{
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

namespace
{

void add_check(VerifyReport &rep, std::string name, double measured, double threshold,
               std::string detail = {})
{
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.threshold = threshold;
  c.passed = std::isfinite(measured) && measured <= threshold;
  c.detail = std::move(detail);
  rep.checks.push_back(std::move(c));
}

// Solution of B x = b by a direct factorization that does not use the substructuring.
ComplexVector direct_solve(const ComplexSparse &B, const ComplexVector &b)
{
  if (B.rows() <= 4500)
  {
    return Eigen::PartialPivLU<ComplexMatrix>(ComplexMatrix(B)).solve(b);
  }
  return sparse_lu_solver(B)(b);
}

double max_abs(const ComplexMatrix &A)
{
  return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

}  // namespace

VerifyReport verify(const ExperimentConfig &config, const VerifyOptions &options)
{
  validate(config);
  VerifyReport rep;
  std::mt19937_64 rng(config.seed);

  Mesh mesh = build_mesh(config.inv_h);
  Decomposition dec = build_decomposition(mesh, config.inv_H);
  const GlobalSystem sys = assemble_global(mesh, dec, config.k);
  const Substructure sub(mesh, dec, config.k, config.beta);
  const Index n = dec.num_dofs();

  // Subassembly of the fine matrix from the local Neumann matrices.
  {
    ComplexMatrix S = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < sub.num_subdomains(); ++i)
    {
      const SubdomainData &d = sub.subdomain(i);
      const Subdomain &s = dec.subdomains[i];
      const ComplexMatrix Bi = d.local.B_full();
      std::vector<Index> map;
      for (Index p = 0; p < d.num_gamma(); ++p) map.push_back(dec.gamma_slot(s, p));
      for (Index p = 0; p < d.local.num_interior(); ++p) map.push_back(dec.interior_slot(s, p));
      for (Index c = 0; c < Bi.cols(); ++c)
        for (Index r = 0; r < Bi.rows(); ++r) S(map[r], map[c]) += Bi(r, c);
    }
    const ComplexMatrix B = ComplexMatrix(sys.B);
    add_check(rep, "subassembly", max_abs(B - S) / max_abs(B), 1e-13);
  }

  // Exact solver identity against a direct solve of B.
  {
    ComplexSparse B0 = sub.B0();
    if (options.corrupt_coarse_matrix)
    {
      B0.coeffRef(0, 0) += 10.0 * std::abs(B0.coeffRef(0, 0)) + 1.0;
    }
    const CoreSolve coarse = sparse_lu_solver(B0);
    const ComplexVector l = random_complex(n, rng);
    ComplexVector u = sub.apply_R0T(coarse(sub.apply_R0(l)));
    for (int i = 0; i < sub.num_subdomains(); ++i)
    {
      const ComplexVector ui = real_times(sub.subdomain(i).B_L, sub.gather_interior(i, l));
      for (Index p = 0; p < ui.size(); ++p) u(dec.interior_slot(dec.subdomains[i], p)) += ui(p);
    }
    const ComplexVector ref = direct_solve(sys.B, l);
    add_check(rep, "exact_solver_identity", (u - ref).norm() / ref.norm(), 1e-8);
  }

  // Decomposition and quadratic-form identities.
  {
    double rec = 0.0, form = 0.0, zero_parts = 0.0;
    for (int t = 0; t < 5; ++t)
    {
      const ComplexVector v = random_complex(n, rng);
      rec = std::max(rec, (sub.recompose(sub.decompose(v)) - v).norm() / v.norm());

      const ComplexVector u0 = random_complex(sub.coarse_dim(), rng);
      const ComplexVector v0 = random_complex(sub.coarse_dim(), rng);
      const ComplexVector U = sub.apply_R0T(u0), V = sub.apply_R0T(v0);
      const Complex coarse = v0.dot(sub.B0() * u0);
      const ComplexVector BU = sys.B * U;
      const Complex fine = V.dot(BU);
      form = std::max(form, std::abs(coarse - fine) / (V.norm() * BU.norm()));

      const auto parts = sub.decompose(U);
      double m = (parts.v0 - u0).norm() / u0.norm();
      for (const auto &vi : parts.v_i) m = std::max(m, vi.norm() / U.norm());
      zero_parts = std::max(zero_parts, m);
    }
    add_check(rep, "decomposition_identity", rec, 1e-11);
    add_check(rep, "quadratic_form_identity", form, 1e-10);
    add_check(rep, "coarse_vector_uniqueness", zero_parts, 1e-9);
  }

  // H0 norm identity and local residual orthogonality.
  {
    const ComplexVector u0 = random_complex(sub.coarse_dim(), rng);
    const RealSparse H0 = sub.H0_assembled();
    const Complex lhs = u0.dot(H0.cast<Complex>() * u0);
    const ComplexVector E = sub.apply_H0T(u0);
    const RealSparse H = sys.H;
    const Complex rhs = E.dot(H.cast<Complex>() * E);
    add_check(rep, "h0_norm_identity", std::abs(lhs - rhs) / std::abs(rhs), 1e-10);

    const ComplexVector r = sub.apply_R0T(random_complex(sub.coarse_dim(), rng));
    const ComplexVector Br = sys.B * r;
    double worst = 0.0;
    for (int i = 0; i < sub.num_subdomains(); ++i)
    {
      const ComplexVector q =
          real_times(sub.subdomain(i).split.Q_L.transpose(), sub.gather_interior(i, Br));
      worst = std::max(worst, q.norm());
    }
    add_check(rep, "local_residual_orthogonality", worst / Br.norm(), 1e-10);
  }

  // Mode and bordered-system local solves agree.
  {
    double worst = 0.0;
    for (int i = 0; i < sub.num_subdomains(); ++i)
    {
      const SubdomainData &d = sub.subdomain(i);
      const ComplexVector b = random_complex(d.local.num_interior(), rng);
      const ComplexVector a1 = local_solve_modes(d.split, b);
      const ComplexVector a2 = local_solve_saddle(d.local, d.split, b);
      worst = std::max(worst, (a1 - a2).norm() / a1.norm());
    }
    add_check(rep, "local_solve_paths", worst, 1e-9);
  }

  // Spectral identities and Woodbury consistency for the configured kind.
  if (config.kind != PrecondKind::Exact)
  {
    SpectraOptions sopt{config.kind, config.eta_re, config.eta_im, config.large_cutoff_2};
    const auto spectra = compute_spectra(sub, sopt);
    PairDeviations worst;
    for (const auto &sp : spectra)
    {
      for (const ProjectorPair *p : {&sp.re, &sp.im})
      {
        const PairDeviations dv = measure_pair(*p);
        worst.orthonormality = std::max(worst.orthonormality, dv.orthonormality);
        worst.idempotency = std::max(worst.idempotency, dv.idempotency);
        worst.cross_stage = std::max(worst.cross_stage, dv.cross_stage);
        worst.metric_orthogonality = std::max(worst.metric_orthogonality, dv.metric_orthogonality);
        worst.band_excess = std::max(worst.band_excess, dv.band_excess);
      }
    }
    add_check(rep, "metric_orthonormality", worst.orthonormality, 1e-9);
    add_check(rep, "projector_idempotency", worst.idempotency, 1e-9);
    add_check(rep, "stage_projector_product", worst.cross_stage, 1e-9);
    add_check(rep, "projector_metric_orthogonality", worst.metric_orthogonality, 1e-9);
    add_check(rep, "rayleigh_band", worst.band_excess, 1e-9);

    const CorePlusLowRank bp = build_bp(sub, spectra, config.kind);
    const ComplexVector r = random_complex(sub.coarse_dim(), rng);
    add_check(rep, "woodbury_consistency", (bp.apply(bp.apply_inverse(r)) - r).norm() / r.norm(),
              1e-9);
    if (sub.coarse_dim() <= 3000)
    {
      const ComplexMatrix ref = reference_bp_dense(sub, spectra, config.kind);
      add_check(rep, "bp_dual_assembly", max_abs(bp.dense() - ref) / max_abs(ref), 1e-10);
    }
    if (config.kind == PrecondKind::P3 || config.kind == PrecondKind::P4)
    {
      add_check(rep, "core_block_structure",
                static_cast<double>(core_block_violations(sub, bp.C, config.kind)), 0.0);
    }
  }

  // Direct-solver limit: every eigenvector selected.
  {
    const PrecondKind kind =
        (config.kind == PrecondKind::P2 || config.kind == PrecondKind::P4) ? config.kind
                                                                           : PrecondKind::P4;
    SpectraOptions sopt{kind, 0.0, 0.0, false};
    const Preconditioner prec(sub, compute_spectra(sub, sopt), kind);
    const ComplexSparse &B0 = sub.B0();
    double dev = 0.0;
    if (sub.coarse_dim() <= 3000)
    {
      dev = max_abs(prec.bp().dense() - ComplexMatrix(B0)) / max_abs(ComplexMatrix(B0));
    }
    else
    {
      const ComplexVector x = random_complex(sub.coarse_dim(), rng);
      dev = (prec.bp().apply(x) - B0 * x).norm() / (B0 * x).norm();
    }
    add_check(rep, "direct_limit_bp_equals_b0", dev, 1e-9, to_string(kind));
    const ComplexVector r0 = random_complex(sub.coarse_dim(), rng);
    const GmresReport g =
        gmres([&](const ComplexVector &x) -> ComplexVector { return B0 * x; },
              [&](const ComplexVector &x) { return prec.apply_coarse_inverse(x); }, r0, 1e-6, 20);
    add_check(rep, "direct_limit_gmres_iterations", g.iterations, 2.0, to_string(kind));
  }
  return rep;
}

void write_verify_report(const VerifyReport &report, std::ostream &out)
{
  for (const CheckResult &c : report.checks)
  {
    out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(34) << c.name
        << " measured=" << std::scientific << std::setprecision(3) << c.measured
        << " threshold=" << c.threshold << std::defaultfloat;
    if (!c.detail.empty())
    {
      out << " (" << c.detail << ")";
    }
    out << '\n';
  }
  out << (report.all_passed() ? "all checks passed" : "some checks FAILED") << '\n';
}

}  // namespace nosas
