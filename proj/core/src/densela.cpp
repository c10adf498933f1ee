// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include "nosas/densela.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

namespace nosas
{

RealMatrix cholesky(const RealMatrix &M)
{
  if (M.rows() != M.cols())
  {
    throw ConfigError("cholesky: matrix is not square");
  }
  const Index n = M.rows();
  RealMatrix L = RealMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j)
  {
    const double d = M(j, j) - L.row(j).head(j).squaredNorm();
    if (!(d > 0.0))
    {
      throw NotSpdError(j, d);
    }
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    const Index tail = n - j - 1;
    if (tail > 0)
    {
      L.col(j).tail(tail) =
          (M.col(j).tail(tail) - L.bottomLeftCorner(tail, j) * L.row(j).head(j).transpose()) /
          ljj;
    }
  }
  return L;
}

namespace
{

// Row/column interchange of a full symmetric matrix.
void symmetric_swap(ComplexMatrix &A, Index a, Index b)
{
  if (a == b)
  {
    return;
  }
  A.row(a).swap(A.row(b));
  A.col(a).swap(A.col(b));
}

}  // namespace

SymmetricIndefiniteLdlt::SymmetricIndefiniteLdlt(const ComplexMatrix &K)
  : factor_(K)
{
  if (K.rows() != K.cols())
  {
    throw ConfigError("ldlt: matrix is not square");
  }
  const Index n = K.rows();
  perm_.resize(n);
  block_.assign(n, 0);
  for (Index i = 0; i < n; ++i)
  {
    perm_[i] = i;
  }
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
  ComplexMatrix &A = factor_;

  Index k = 0;
  while (k < n)
  {
    const double absakk = std::abs(A(k, k));
    Index imax = k;
    double colmax = 0.0;
    for (Index i = k + 1; i < n; ++i)
    {
      if (std::abs(A(i, k)) > colmax)
      {
        colmax = std::abs(A(i, k));
        imax = i;
      }
    }
    if (std::max(absakk, colmax) == 0.0)
    {
      throw SingularMatrixError("ldlt: zero pivot column at index " + std::to_string(k));
    }

    int size = 1;
    Index kp = k;
    if (absakk < alpha * colmax)
    {
      double rowmax = 0.0;
      for (Index j = k; j < n; ++j)
      {
        if (j != imax)
        {
          rowmax = std::max(rowmax, std::abs(A(imax, j)));
        }
      }
      if (absakk >= alpha * colmax * (colmax / rowmax))
      {
        kp = k;
      }
      else if (std::abs(A(imax, imax)) >= alpha * rowmax)
      {
        kp = imax;
      }
      else
      {
        kp = imax;
        size = 2;
      }
    }

    const Index target = (size == 1) ? k : k + 1;
    if (kp != target)
    {
      symmetric_swap(A, target, kp);
      std::swap(perm_[target], perm_[kp]);
    }

    block_[k] = size;
    if (size == 1)
    {
      const Complex d = A(k, k);
      const Index tail = n - k - 1;
      if (tail > 0)
      {
        const ComplexVector w = A.col(k).tail(tail);
        A.bottomRightCorner(tail, tail).noalias() -= (w / d) * w.transpose();
        A.col(k).tail(tail) = w / d;
      }
    }
    else
    {
      const Complex a = A(k, k), b = A(k + 1, k), c = A(k + 1, k + 1);
      const Complex det = a * c - b * b;
      if (det == Complex(0.0))
      {
        throw SingularMatrixError("ldlt: singular 2x2 pivot at index " + std::to_string(k));
      }
      const Index tail = n - k - 2;
      if (tail > 0)
      {
        const ComplexMatrix W = A.block(k + 2, k, tail, 2);
        Eigen::Matrix2cd Dinv;
        Dinv << c / det, -b / det, -b / det, a / det;
        const ComplexMatrix Lblk = W * Dinv;
        A.bottomRightCorner(tail, tail).noalias() -= Lblk * W.transpose();
        A.block(k + 2, k, tail, 2) = Lblk;
      }
    }
    k += size;
  }
}

Index SymmetricIndefiniteLdlt::num_two_by_two_blocks() const
{
  return std::count(block_.begin(), block_.end(), 2);
}

ComplexVector SymmetricIndefiniteLdlt::solve(const ComplexVector &rhs) const
{
  const Index n = size();
  if (rhs.size() != n)
  {
    throw ConfigError("ldlt: right-hand side has wrong size");
  }
  const ComplexMatrix &A = factor_;
  ComplexVector y(n);
  for (Index i = 0; i < n; ++i)
  {
    y(i) = rhs(perm_[i]);
  }

  // L z = y
  for (Index k = 0; k < n;)
  {
    const int size = block_[k];
    const Index tail = n - k - size;
    if (tail > 0)
    {
      y.tail(tail).noalias() -= A.block(k + size, k, tail, size) * y.segment(k, size);
    }
    k += size;
  }
  // D w = z
  for (Index k = 0; k < n;)
  {
    if (block_[k] == 1)
    {
      y(k) /= A(k, k);
      k += 1;
    }
    else
    {
      const Complex a = A(k, k), b = A(k + 1, k), c = A(k + 1, k + 1);
      const Complex det = a * c - b * b;
      const Complex y0 = y(k), y1 = y(k + 1);
      y(k) = (c * y0 - b * y1) / det;
      y(k + 1) = (a * y1 - b * y0) / det;
      k += 2;
    }
  }
  // L^T x = w, walking blocks backwards
  std::vector<Index> starts;
  for (Index k = 0; k < n; k += block_[k])
  {
    starts.push_back(k);
  }
  for (auto it = starts.rbegin(); it != starts.rend(); ++it)
  {
    const Index k = *it;
    const int size = block_[k];
    const Index tail = n - k - size;
    if (tail > 0)
    {
      y.segment(k, size).noalias() -= A.block(k + size, k, tail, size).transpose() * y.tail(tail);
    }
  }

  ComplexVector x(n);
  for (Index i = 0; i < n; ++i)
  {
    x(perm_[i]) = y(i);
  }
  return x;
}

ComplexVector ldlt_solve(const ComplexMatrix &K, const ComplexVector &rhs)
{
  return SymmetricIndefiniteLdlt(K).solve(rhs);
}

namespace
{

void normalize_signs(RealMatrix &vectors)
{
  for (Index j = 0; j < vectors.cols(); ++j)
  {
    Index imax = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&imax);
    if (vectors(imax, j) < 0.0)
    {
      vectors.col(j) *= -1.0;
    }
  }
}

}  // namespace

GenEigResult sym_eig(const RealMatrix &S)
{
  if (S.rows() != S.cols())
  {
    throw ConfigError("sym_eig: matrix is not square");
  }
  GenEigResult out;
  if (S.rows() == 0)
  {
    return out;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(S, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
  {
    throw NumericalError("sym_eig: QR iteration did not converge");
  }
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  normalize_signs(out.vectors);
  return out;
}

GenEigResult gen_eig_spd(const RealMatrix &A, const RealMatrix &M)
{
  if (A.rows() != A.cols() || M.rows() != M.cols() || A.rows() != M.rows())
  {
    throw ConfigError("gen_eig_spd: dimension mismatch");
  }
  GenEigResult out;
  if (A.rows() == 0)
  {
    return out;
  }
  const RealMatrix L = cholesky(M);
  const auto lower = L.triangularView<Eigen::Lower>();
  // L^{-1} A L^{-T} = L^{-1} (L^{-1} A)^T for symmetric A.
  const RealMatrix left = lower.solve(A);
  RealMatrix reduced = lower.solve(left.transpose());
  reduced = 0.5 * (reduced + reduced.transpose()).eval();

  GenEigResult standard = sym_eig(reduced);
  out.values = std::move(standard.values);
  out.vectors = L.transpose().triangularView<Eigen::Upper>().solve(standard.vectors);
  normalize_signs(out.vectors);
  return out;
}

CoreSolve sparse_lu_solver(const ComplexSparse &A)
{
  if (A.rows() != A.cols())
  {
    throw ConfigError("sparse_lu_solver: matrix is not square");
  }
  auto lu = std::make_shared<Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>>>();
  ComplexSparse compressed = A;
  compressed.makeCompressed();
  lu->compute(compressed);
  if (lu->info() != Eigen::Success)
  {
    throw SingularMatrixError("sparse LU failed: " + lu->lastErrorMessage());
  }
  return [lu](const ComplexVector &b) -> ComplexVector { return lu->solve(b); };
}

WoodburyOperator::WoodburyOperator(CoreSolve core, std::vector<LowRankPair> pairs)
  : core_(std::move(core)), pairs_(std::move(pairs))
{
  if (pairs_.empty())
  {
    return;
  }
  n_ = pairs_.front().U.rows();
  std::vector<ComplexTriplet> ut, vt;
  Index offset = 0;
  for (const auto &p : pairs_)
  {
    if (p.U.rows() != n_ || p.V.cols() != n_ || p.U.cols() != p.V.rows())
    {
      throw ConfigError("woodbury: inconsistent low-rank factor dimensions");
    }
    for (int c = 0; c < p.U.outerSize(); ++c)
    {
      for (ComplexSparse::InnerIterator it(p.U, c); it; ++it)
      {
        ut.emplace_back(it.row(), offset + it.col(), it.value());
      }
    }
    for (int c = 0; c < p.V.outerSize(); ++c)
    {
      for (ComplexSparse::InnerIterator it(p.V, c); it; ++it)
      {
        vt.emplace_back(offset + it.row(), it.col(), it.value());
      }
    }
    offset += p.U.cols();
  }
  rank_ = offset;
  U_.resize(n_, rank_);
  U_.setFromTriplets(ut.begin(), ut.end());
  V_.resize(rank_, n_);
  V_.setFromTriplets(vt.begin(), vt.end());
  if (rank_ == 0)
  {
    return;
  }

  // Column j of M is e_j - V A^{-1} u_j; A^{-1} u_j is usually local, so keep it sparse.
  std::vector<ComplexTriplet> mt;
  for (Index j = 0; j < rank_; ++j)
  {
    const ComplexVector y = core_(ComplexVector(U_.col(j)));
    Eigen::SparseVector<Complex> ys(n_);
    for (Index i = 0; i < n_; ++i)
    {
      if (y(i) != Complex(0.0))
      {
        ys.insertBack(i) = y(i);
      }
    }
    const Eigen::SparseVector<Complex> vy = V_ * ys;
    bool diagonal_seen = false;
    for (Eigen::SparseVector<Complex>::InnerIterator it(vy); it; ++it)
    {
      Complex value = -it.value();
      if (it.index() == j)
      {
        value += 1.0;
        diagonal_seen = true;
      }
      mt.emplace_back(it.index(), j, value);
    }
    if (!diagonal_seen)
    {
      mt.emplace_back(j, j, Complex(1.0));
    }
  }
  capacitance_.resize(rank_, rank_);
  capacitance_.setFromTriplets(mt.begin(), mt.end());
  capacitance_.makeCompressed();

  capacitance_lu_ =
      std::make_shared<Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>>>();
  capacitance_lu_->compute(capacitance_);
  if (capacitance_lu_->info() != Eigen::Success)
  {
    throw SingularMatrixError("woodbury: capacitance matrix is singular (rank " +
                              std::to_string(rank_) + ")");
  }
}

ComplexVector WoodburyOperator::apply(const ComplexVector &x) const
{
  ComplexVector y = core_(x);
  if (rank_ == 0)
  {
    return y;
  }
  const ComplexVector t = V_ * y;
  const ComplexVector s = capacitance_lu_->solve(t);
  y += core_(U_ * s);
  return y;
}

WoodburyOperator woodbury_build(CoreSolve core, const ComplexMatrix &U1, const ComplexMatrix &V1,
                                const ComplexMatrix &U2, const ComplexMatrix &V2)
{
  std::vector<LowRankPair> pairs;
  pairs.push_back({U1.sparseView(), V1.sparseView()});
  pairs.push_back({U2.sparseView(), V2.sparseView()});
  return WoodburyOperator(std::move(core), std::move(pairs));
}

}  // namespace nosas
