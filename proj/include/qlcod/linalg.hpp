#pragma once

// Complex matrix kernel shared by the operator, superoperator and observable code.
//
// Dense matrices are column-major Eigen matrices; sparse matrices are compressed
// column (CSC). Conversions between the two are exact.

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qlcod::linalg {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest row or column count any kron() result may have unless the caller
/// passes its own limit. 2^22 covers a two-site superoperator up to n_max = 45.
inline constexpr Index kDefaultMaxDimension = Index{1} << 22;

/// Absolute tolerance on max |h - h^dagger| accepted as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

/// Systems smaller than this are solved densely.
inline constexpr Index kDenseSolveThreshold = 256;

/// Relative pivot floor below which solve() reports a singular system.
inline constexpr double kSingularPivot = 1e-14;

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b,
                  Index max_dimension = kDefaultMaxDimension);
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b,
                 Index max_dimension = kDefaultMaxDimension);

SparseMatrix sparse_identity(Index n);
SparseMatrix to_sparse(const DenseMatrix& m);
DenseMatrix to_dense(const SparseMatrix& m);

double max_asymmetry(const DenseMatrix& h);
double max_asymmetry(const SparseMatrix& h);

struct EigenDecomposition {
  RealVector values;    // ascending
  DenseMatrix vectors;  // column k belongs to values[k]
};

// Throws Error(NotHermitian) naming the measured asymmetry.
EigenDecomposition hermitian_eig(const DenseMatrix& h, double tolerance = kHermitianTolerance);
RealVector hermitian_eigenvalues(const DenseMatrix& h, double tolerance = kHermitianTolerance);

// Throws Error(Singular) if the smallest pivot falls below kSingularPivot * ||a||.
Vector solve(const DenseMatrix& a, const Vector& b);
Vector solve(const SparseMatrix& a, const Vector& b);

/// Sum of |eigenvalue| of a Hermitian matrix, i.e. Tr sqrt(m^dagger m).
double trace_norm_hermitian(const DenseMatrix& m, double tolerance = kHermitianTolerance);

double spectral_norm(const DenseMatrix& m);
double inf_norm(const SparseMatrix& m);  // max absolute row sum
double inf_norm(const DenseMatrix& m);

/// Name of the sparse LU backend compiled in ("umfpack" or "eigen-sparselu").
const char* sparse_backend() noexcept;

}  // namespace qlcod::linalg
