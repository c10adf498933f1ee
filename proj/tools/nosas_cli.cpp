// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

// nosas run|table|verify: command line front end for the driver.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "nosas/driver.hpp"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;

enum class Format
{
  Csv,
  Md
};

// Raw option text, keyed by config-file spelling. Applied on top of the config file.
struct Options
{
  std::string config_file;
  std::string out;
  std::string format = "md";
  std::map<std::string, std::string> values;
  bool export_matrices = false;
  bool large_cutoff_2 = false;
};

void add_common(CLI::App *app, Options &o, bool list_sizes)
{
  app->add_option("-c,--config", o.config_file, "key=value config file; flags override it");
  const char *h_help = list_sizes ? "fine mesh divisions 1/h, comma separated rows"
                                  : "fine mesh divisions 1/h";
  const char *H_help = list_sizes ? "subdomains per side 1/H, comma separated columns"
                                  : "subdomains per side 1/H";
  for (const auto &[flag, key, help] :
       std::vector<std::tuple<std::string, std::string, std::string>>{
           {"--k", "k", "wavenumber"},
           {"--inv-h", "inv-h", h_help},
           {"--inv-H", "inv-H", H_help},
           {"--beta", "beta", "small-mode threshold for the interior eigenproblem"},
           {"--eta-re", "eta-re", "selection threshold, real part"},
           {"--eta-im", "eta-im", "selection threshold, imaginary part"},
           {"--precond", "precond", "p1, p2, p3, p4 or exact"},
           {"--tol", "tol", "GMRES relative tolerance"},
           {"--max-it", "max-it", "GMRES iteration limit"},
           {"--seed", "seed", "seed for randomized checks"},
           {"--export-dir", "export-dir", "directory for exported matrices"}})
  {
    app->add_option_function<std::string>(
        flag, [&o, key](const std::string &v) { o.values[key] = v; }, help);
  }
  app->add_option("-o,--out", o.out, "output file (default stdout)");
  app->add_option("--format", o.format, "csv or md")
      ->check(CLI::IsMember({"csv", "md"}, CLI::ignore_case));
  app->add_flag("--export-matrices", o.export_matrices,
                "write B, B0 and C in Matrix Market format");
  app->add_flag("--large-cutoff-2", o.large_cutoff_2,
                "select large eigenvalues only above 2 instead of 1 + eta");
}

std::vector<int> parse_int_list(const std::string &key, const std::string &text)
{
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    nosas::ExperimentConfig probe;
    nosas::apply_config_value(probe, "max-it", item);  // strict integer parse
    out.push_back(probe.max_it);
  }
  if (out.empty())
  {
    throw nosas::ConfigError("'" + key + "': empty list");
  }
  return out;
}

struct Resolved
{
  nosas::ExperimentConfig config;
  std::vector<int> rows, cols;
};

// Config file first, then flags. For tables, inv-h / inv-H may be lists.
Resolved resolve(const Options &o, bool lists)
{
  std::vector<std::pair<std::string, std::string>> kv;
  if (!o.config_file.empty())
  {
    std::ifstream in(o.config_file);
    if (!in)
    {
      throw nosas::ConfigError("cannot read config file '" + o.config_file + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    kv = nosas::parse_config_text(ss.str());
  }
  for (const auto &p : o.values)
  {
    kv.push_back(p);
  }
  if (o.export_matrices)
  {
    kv.emplace_back("export-matrices", "true");
  }
  if (o.large_cutoff_2)
  {
    kv.emplace_back("large-cutoff-2", "true");
  }

  Resolved r;
  for (auto [key, value] : kv)
  {
    std::replace(key.begin(), key.end(), '_', '-');
    if (lists && (key == "inv-h" || key == "inv-H"))
    {
      (key == "inv-h" ? r.rows : r.cols) = parse_int_list(key, value);
      continue;
    }
    nosas::apply_config_value(r.config, key, value);
  }
  if (lists)
  {
    if (r.rows.empty()) r.rows = {r.config.inv_h};
    if (r.cols.empty()) r.cols = {r.config.inv_H};
    for (int ih : r.rows)
    {
      for (int iH : r.cols)
      {
        nosas::ExperimentConfig c = r.config;
        c.inv_h = ih;
        c.inv_H = iH;
        nosas::validate(c);
      }
    }
  }
  else
  {
    nosas::validate(r.config);
  }
  return r;
}

Format parse_format(const std::string &f)
{
  return (f == "csv" || f == "CSV") ? Format::Csv : Format::Md;
}

void write_run(const nosas::RunResult &r, Format fmt, std::ostream &out)
{
  const auto &c = r.config;
  const std::vector<std::pair<std::string, std::string>> rows = [&]
  {
    auto num = [](double v)
    {
      std::ostringstream s;
      s << std::setprecision(6) << v;
      return s.str();
    };
    return std::vector<std::pair<std::string, std::string>>{
        {"k", num(c.k)},
        {"inv_h", std::to_string(c.inv_h)},
        {"inv_H", std::to_string(c.inv_H)},
        {"precond", nosas::to_string(c.kind)},
        {"beta", num(c.beta)},
        {"eta_re", num(c.eta_re)},
        {"eta_im", num(c.eta_im)},
        {"converged", r.converged ? "true" : "false"},
        {"iterations", std::to_string(r.iterations)},
        {"eig_re_max", std::to_string(r.eigen.re_max)},
        {"eig_re_avg", num(r.eigen.re_avg)},
        {"eig_im_max", std::to_string(r.eigen.im_max)},
        {"eig_im_avg", num(r.eigen.im_avg)},
        {"num_subdomains", std::to_string(r.num_subdomains)},
        {"coarse_dim", std::to_string(r.coarse_dim)},
        {"small_modes", std::to_string(r.num_small_modes)},
        {"low_rank", std::to_string(r.low_rank)},
        {"local_solves", std::to_string(r.local_solves)},
        {"fine_relative_residual", num(r.fine_relative_residual)},
        {"max_nodal_error", num(r.max_nodal_error)},
        {"setup_seconds", num(r.setup_seconds)},
        {"solve_seconds", num(r.solve_seconds)}};
  }();
  if (fmt == Format::Csv)
  {
    for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << rows[i].first;
    out << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << rows[i].second;
    out << '\n';
  }
  else
  {
    out << "| quantity | value |\n|---|---|\n";
    for (const auto &[k, v] : rows) out << "| " << k << " | " << v << " |\n";
  }
  for (const auto &f : r.exported_files)
  {
    std::cerr << "wrote " << f << '\n';
  }
}

template <class Fn>
void emit(const std::string &path, Fn &&fn)
{
  if (path.empty())
  {
    fn(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f)
  {
    throw nosas::ConfigError("cannot write '" + path + "'");
  }
  fn(f);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Helmholtz iterative substructuring with NOSAS coarse preconditioners"};
  app.require_subcommand(1);

  Options run_o, table_o, verify_o;
  CLI::App *run_cmd = app.add_subcommand("run", "solve one configuration");
  add_common(run_cmd, run_o, false);
  CLI::App *table_cmd = app.add_subcommand("table", "iterations(eigenfunctions) over a grid");
  add_common(table_cmd, table_o, true);
  CLI::App *verify_cmd = app.add_subcommand("verify", "check algebraic identities");
  add_common(verify_cmd, verify_o, false);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::Success &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kExitConfig;
  }

  try
  {
    if (*run_cmd)
    {
      const Resolved r = resolve(run_o, false);
      const nosas::RunResult res = nosas::run(r.config);
      emit(run_o.out, [&](std::ostream &os) { write_run(res, parse_format(run_o.format), os); });
      if (!res.converged)
      {
        std::cerr << "GMRES did not converge in " << r.config.max_it << " iterations\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }
    if (*table_cmd)
    {
      const Resolved r = resolve(table_o, true);
      const nosas::Table t = nosas::run_table(r.config, r.rows, r.cols);
      emit(table_o.out,
           [&](std::ostream &os)
           {
             if (parse_format(table_o.format) == Format::Csv)
               nosas::write_table_csv(t, os);
             else
               nosas::write_table_markdown(t, os);
           });
      for (const auto &cell : t.cells)
      {
        if (!cell.ok)
          std::cerr << "h=1/" << cell.inv_h << " H=1/" << cell.inv_H << ": " << cell.error << '\n';
      }
      return t.all_ok() ? kExitOk : kExitNotConverged;
    }
    const Resolved r = resolve(verify_o, false);
    const nosas::VerifyReport rep = nosas::verify(r.config);
    emit(verify_o.out, [&](std::ostream &os) { nosas::write_verify_report(rep, os); });
    return rep.all_passed() ? kExitOk : kExitNotConverged;
  }
  catch (const nosas::ConfigError &e)
  {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
