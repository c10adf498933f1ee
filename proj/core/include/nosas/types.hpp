// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef NOSAS_TYPES_HPP
#define NOSAS_TYPES_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace nosas
{

using Index = Eigen::Index;
using Complex = std::complex<double>;

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using IndexList = std::vector<Index>;

using RealSparse = Eigen::SparseMatrix<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;
using ComplexTriplet = Eigen::Triplet<Complex>;
using RealTriplet = Eigen::Triplet<double>;

inline constexpr Complex kI{0.0, 1.0};

// Invalid user input: bad mesh sizes, thresholds out of range, malformed config.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A factorization or eigensolver could not complete.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class NotSpdError : public NumericalError
{
public:
  NotSpdError(Index pivot, double value)
    : NumericalError("matrix is not SPD: non-positive pivot " + std::to_string(value) +
                     " at index " + std::to_string(pivot)),
      pivot_(pivot)
  {
  }
  Index pivot() const { return pivot_; }

private:
  Index pivot_;
};

class SingularMatrixError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

}  // namespace nosas

#endif  // NOSAS_TYPES_HPP
