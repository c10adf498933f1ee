// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_DRIVER_HPP
#define NOSAS_DRIVER_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nosas/krylov.hpp"
#include "nosas/spectra.hpp"
#include "nosas/types.hpp"

namespace nosas
{

struct ExperimentConfig
{
  double k = 20.0;
  int inv_h = 32;
  int inv_H = 4;
  double beta = 0.01;
  double eta_re = 0.4;
  double eta_im = 0.9;
  PrecondKind kind = PrecondKind::P4;
  double tol = 1e-6;
  int max_it = 200;
  std::uint64_t seed = 1;
  bool large_cutoff_2 = false;
  // When set, run() writes B.mtx ((Gamma, I) ordering), B0.mtx and C.mtx into export_dir.
  bool export_matrices = false;
  std::string export_dir = ".";
};

// Throws ConfigError on invalid values.
void validate(const ExperimentConfig &config);

// Sets one field from a key (flag spelling, e.g. "inv-h", or with underscores) and its text.
void apply_config_value(ExperimentConfig &config, const std::string &key,
                        const std::string &value);

// Flat "key = value" lines; '#' starts a comment. Returns the parsed pairs in file order.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string &text);
ExperimentConfig load_config_file(const std::string &path, ExperimentConfig base = {});

struct RunResult
{
  ExperimentConfig config;
  bool converged = false;
  int iterations = 0;
  EigenCounts eigen;
  int num_subdomains = 0;
  Index coarse_dim = 0;
  Index num_small_modes = 0;  // sum of k_i
  Index low_rank = 0;         // Woodbury rank
  std::size_t local_solves = 0;
  double fine_relative_residual = 0.0;
  double max_nodal_error = 0.0;  // against the exact plane wave
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
  GmresReport gmres;
  std::vector<std::string> exported_files;
};

// Algorithm: local solves, GMRES on the coarse system with B_P^{-1}, reconstruction.
RunResult run(const ExperimentConfig &config);

//
// Table of "iterations(eigen count)" cells over rows inv_h and columns inv_H. Cells that fail
// (no convergence, invalid sizes, singular operators) are marked DNF.
//
struct TableCell
{
  int inv_h = 0;
  int inv_H = 0;
  bool ok = false;
  std::string error;
  RunResult result;
};

struct Table
{
  ExperimentConfig base;
  std::vector<int> rows;  // inv_h
  std::vector<int> cols;  // inv_H
  std::vector<TableCell> cells;  // row-major

  const TableCell &at(std::size_t r, std::size_t c) const { return cells[r * cols.size() + c]; }
  bool all_ok() const;
};

Table run_table(const ExperimentConfig &base, const std::vector<int> &inv_h_rows,
                const std::vector<int> &inv_H_cols);

std::string format_cell(const TableCell &cell);
void write_table_markdown(const Table &table, std::ostream &out);
void write_table_csv(const Table &table, std::ostream &out);

struct CheckResult
{
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport
{
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

struct VerifyOptions
{
  // Test hook: perturb one entry of the assembled coarse matrix before the exact-solver check.
  bool corrupt_coarse_matrix = false;
};

VerifyReport verify(const ExperimentConfig &config, const VerifyOptions &options = {});
void write_verify_report(const VerifyReport &report, std::ostream &out);

// Matrix Market (coordinate, complex, general) with 1-based indices.
void write_matrix_market(const ComplexSparse &A, const std::string &path);

}  // namespace nosas

#endif  // NOSAS_DRIVER_HPP
