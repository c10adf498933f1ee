// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include "nosas/krylov.hpp"

#include <cmath>
#include <ostream>

namespace nosas
{

namespace
{

// Rotation zeroing b in (a, b): [c s; -conj(s) c] with real c.
void make_givens(Complex a, Complex b, double &c, Complex &s)
{
  const double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0)
  {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (na == 0.0)
  {
    c = 0.0;
    s = std::conj(b) / nb;
    return;
  }
  const double r = std::hypot(na, nb);
  c = na / r;
  s = (a / na) * std::conj(b) / r;
}

}  // namespace

GmresReport gmres(const LinearOperator &apply_A, const LinearOperator &apply_Minv,
                  const ComplexVector &rhs, double tol, int max_it)
{
  if (!(tol > 0.0))
  {
    throw ConfigError("gmres: tol must be positive");
  }
  if (max_it < 1)
  {
    throw ConfigError("gmres: max_it must be at least 1");
  }
  const Index n = rhs.size();
  GmresReport rep;
  rep.solution = ComplexVector::Zero(n);

  const ComplexVector z0 = apply_Minv(rhs);
  const double beta = z0.norm();
  rep.relative_residuals.push_back(1.0);
  if (beta == 0.0)
  {
    rep.converged = true;
    return rep;
  }

  const int m = static_cast<int>(std::min<Index>(max_it, n));
  ComplexMatrix V(n, m + 1);
  ComplexMatrix Hm = ComplexMatrix::Zero(m + 1, m);
  std::vector<double> cs(m);
  std::vector<Complex> sn(m);
  ComplexVector g = ComplexVector::Zero(m + 1);
  g(0) = beta;
  V.col(0) = z0 / beta;

  int filled = 1;
  int j = 0;
  for (; j < m; ++j)
  {
    ComplexVector w = apply_Minv(apply_A(V.col(j)));
    const double before = w.norm();
    for (int i = 0; i <= j; ++i)
    {
      const Complex h = V.col(i).dot(w);
      Hm(i, j) = h;
      w -= h * V.col(i);
    }
    if (w.norm() < 0.7 * before)
    {
      for (int i = 0; i <= j; ++i)
      {
        const Complex h = V.col(i).dot(w);
        Hm(i, j) += h;
        w -= h * V.col(i);
      }
    }
    const double hn = w.norm();
    Hm(j + 1, j) = hn;

    for (int i = 0; i < j; ++i)
    {
      const Complex t = cs[i] * Hm(i, j) + sn[i] * Hm(i + 1, j);
      Hm(i + 1, j) = -std::conj(sn[i]) * Hm(i, j) + cs[i] * Hm(i + 1, j);
      Hm(i, j) = t;
    }
    make_givens(Hm(j, j), Hm(j + 1, j), cs[j], sn[j]);
    Hm(j, j) = cs[j] * Hm(j, j) + sn[j] * Hm(j + 1, j);
    Hm(j + 1, j) = 0.0;
    g(j + 1) = -std::conj(sn[j]) * g(j);
    g(j) = cs[j] * g(j);

    const double rel = std::abs(g(j + 1)) / beta;
    rep.relative_residuals.push_back(rel);
    const bool breakdown = hn <= 1e-14 * before;
    if (!breakdown)
    {
      V.col(j + 1) = w / hn;
      ++filled;
    }
    if (rel <= tol || breakdown)
    {
      ++j;
      break;
    }
  }
  rep.iterations = j;

  // Back substitution on the rotated Hessenberg system.
  ComplexVector y(j);
  for (int i = j - 1; i >= 0; --i)
  {
    Complex acc = g(i);
    for (int l = i + 1; l < j; ++l)
    {
      acc -= Hm(i, l) * y(l);
    }
    y(i) = acc / Hm(i, i);
  }
  rep.solution = V.leftCols(j) * y;

  const ComplexVector r = apply_Minv(rhs - apply_A(rep.solution));
  rep.final_relative_residual = r.norm() / beta;
  rep.converged = rep.relative_residuals.back() <= tol || rep.final_relative_residual <= tol;

  const ComplexMatrix G = V.leftCols(filled).adjoint() * V.leftCols(filled);
  rep.orthogonality_loss =
      (G - ComplexMatrix::Identity(filled, filled)).cwiseAbs().maxCoeff();
  return rep;
}

void write_residual_history_csv(const GmresReport &report, std::ostream &out)
{
  out << "iteration,relative_residual\n";
  for (std::size_t i = 0; i < report.relative_residuals.size(); ++i)
  {
    out << i << ',' << report.relative_residuals[i] << '\n';
  }
}

}  // namespace nosas
