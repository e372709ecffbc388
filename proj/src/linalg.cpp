#include "qlcod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#ifdef QLCOD_HAVE_UMFPACK
#include <umfpack.h>
#else
#include <Eigen/SparseLU>
#endif

#include "qlcod/error.hpp"

namespace qlcod::linalg {

namespace {

void check_kron_dims(Index ra, Index ca, Index rb, Index cb, Index max_dimension) {
  if (ra < 1 || ca < 1 || rb < 1 || cb < 1) {
    throw Error(ErrorCode::InvalidArgument, "kron: empty operand");
  }
  if (ra > max_dimension / rb || ca > max_dimension / cb) {
    std::ostringstream os;
    os << "kron: result " << ra << "x" << rb << " by " << ca << "x" << cb
       << " exceeds maximum dimension " << max_dimension;
    throw Error(ErrorCode::DimensionLimit, os.str());
  }
}

void require_hermitian(const DenseMatrix& h, double tolerance, const char* who) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::InvalidArgument, std::string(who) + ": matrix is not square");
  }
  const double asym = max_asymmetry(h);
  if (!(asym <= tolerance)) {
    std::ostringstream os;
    os << who << ": input not Hermitian (max |h - h^dagger| = " << asym << ", tolerance "
       << tolerance << ")";
    throw Error(ErrorCode::NotHermitian, os.str());
  }
}

void check_residual(const Vector& residual, double a_norm, const Vector& x, const Vector& b) {
  const double r = residual.norm();
  const double bound = 1e-8 * (a_norm * x.norm() + b.norm());
  if (!(r <= bound)) {
    std::ostringstream os;
    os << "solve: residual " << r << " exceeds bound " << bound;
    throw Error(ErrorCode::Singular, os.str());
  }
}

}  // namespace

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b, Index max_dimension) {
  check_kron_dims(a.rows(), a.cols(), b.rows(), b.cols(), max_dimension);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
  for (Index ca = 0; ca < a.outerSize(); ++ca) {
    for (SparseMatrix::InnerIterator ia(a, ca); ia; ++ia) {
      for (Index cb = 0; cb < b.outerSize(); ++cb) {
        for (SparseMatrix::InnerIterator ib(b, cb); ib; ++ib) {
          triplets.emplace_back(static_cast<int>(ia.row() * b.rows() + ib.row()),
                                static_cast<int>(ca * b.cols() + cb), ia.value() * ib.value());
        }
      }
    }
  }
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b, Index max_dimension) {
  check_kron_dims(a.rows(), a.cols(), b.rows(), b.cols(), max_dimension);
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

SparseMatrix sparse_identity(Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

SparseMatrix to_sparse(const DenseMatrix& m) {
  // sparseView() drops exact zeros only, so the round trip is exact.
  return m.sparseView(Complex(0.0), 0.0);
}

DenseMatrix to_dense(const SparseMatrix& m) { return DenseMatrix(m); }

double max_asymmetry(const DenseMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Index j = 0; j < h.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(h(i, j) - std::conj(h(j, i))));
    }
  }
  return worst;
}

double max_asymmetry(const SparseMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  const SparseMatrix diff = h - SparseMatrix(h.adjoint());
  double worst = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

EigenDecomposition hermitian_eig(const DenseMatrix& h, double tolerance) {
  require_hermitian(h, tolerance, "hermitian_eig");
  // Average with the adjoint so the solver sees an exactly Hermitian matrix.
  const DenseMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Computation, "hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const DenseMatrix& h, double tolerance) {
  require_hermitian(h, tolerance, "hermitian_eigenvalues");
  const DenseMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Computation, "hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

Vector solve(const DenseMatrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw Error(ErrorCode::InvalidArgument, "solve: dimension mismatch");
  }
  Eigen::PartialPivLU<DenseMatrix> lu(a);
  const double a_norm = inf_norm(a);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > kSingularPivot * a_norm)) {
    std::ostringstream os;
    os << "solve: numerically singular (pivot " << min_pivot << " vs ||a|| = " << a_norm << ")";
    throw Error(ErrorCode::Singular, os.str());
  }
  Vector x = lu.solve(b);
  check_residual(a * x - b, a_norm, x, b);
  return x;
}

#ifdef QLCOD_HAVE_UMFPACK

Vector solve(const SparseMatrix& a_in, const Vector& b) {
  if (a_in.rows() != a_in.cols() || a_in.rows() != b.size()) {
    throw Error(ErrorCode::InvalidArgument, "solve: dimension mismatch");
  }
  SparseMatrix a = a_in;
  a.makeCompressed();
  const int n = static_cast<int>(a.rows());
  const int* ap = a.outerIndexPtr();
  const int* ai = a.innerIndexPtr();
  const double* ax = reinterpret_cast<const double*>(a.valuePtr());

  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  // Nested dissection keeps fill-in of the lattice-like Liouvillian far below AMD/COLAMD.
  control[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
  void* symbolic = nullptr;
  void* numeric = nullptr;
  int status = umfpack_zi_symbolic(n, n, ap, ai, ax, nullptr, &symbolic, control, info);
  if (status != UMFPACK_OK) {
    control[UMFPACK_ORDERING] = UMFPACK_DEFAULT_ORDERING;
    status = umfpack_zi_symbolic(n, n, ap, ai, ax, nullptr, &symbolic, control, info);
  }
  if (status != UMFPACK_OK) {
    throw Error(ErrorCode::Computation,
                "solve: UMFPACK symbolic analysis failed (status " + std::to_string(status) + ")");
  }
  status = umfpack_zi_numeric(ap, ai, ax, nullptr, symbolic, &numeric, control, info);
  umfpack_zi_free_symbolic(&symbolic);
  const double rcond = info[UMFPACK_RCOND];
  if (status == UMFPACK_WARNING_singular_matrix || !(rcond > kSingularPivot)) {
    if (numeric) umfpack_zi_free_numeric(&numeric);
    std::ostringstream os;
    os << "solve: numerically singular (pivot ratio " << rcond << ")";
    throw Error(ErrorCode::Singular, os.str());
  }
  if (status != UMFPACK_OK) {
    if (numeric) umfpack_zi_free_numeric(&numeric);
    throw Error(ErrorCode::Computation,
                "solve: UMFPACK factorization failed (status " + std::to_string(status) + ")");
  }
  Vector x(n);
  status = umfpack_zi_solve(UMFPACK_A, ap, ai, ax, nullptr, reinterpret_cast<double*>(x.data()),
                            nullptr, reinterpret_cast<const double*>(b.data()), nullptr, numeric,
                            control, info);
  umfpack_zi_free_numeric(&numeric);
  if (status != UMFPACK_OK) {
    throw Error(ErrorCode::Computation,
                "solve: UMFPACK solve failed (status " + std::to_string(status) + ")");
  }
  check_residual(a * x - b, inf_norm(a), x, b);
  return x;
}

const char* sparse_backend() noexcept { return "umfpack"; }

#else

Vector solve(const SparseMatrix& a_in, const Vector& b) {
  if (a_in.rows() != a_in.cols() || a_in.rows() != b.size()) {
    throw Error(ErrorCode::InvalidArgument, "solve: dimension mismatch");
  }
  SparseMatrix a = a_in;
  a.makeCompressed();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::Singular, "solve: sparse LU failed: " + lu.lastErrorMessage());
  }
  Vector x = lu.solve(b);
  check_residual(a * x - b, inf_norm(a), x, b);
  return x;
}

const char* sparse_backend() noexcept { return "eigen-sparselu"; }

#endif

double trace_norm_hermitian(const DenseMatrix& m, double tolerance) {
  require_hermitian(m, tolerance, "trace_norm_hermitian");
  return hermitian_eigenvalues(m, tolerance).cwiseAbs().sum();
}

double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues()(0);
}

double inf_norm(const SparseMatrix& m) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      row_sums(it.row()) += std::abs(it.value());
    }
  }
  return m.rows() ? row_sums.maxCoeff() : 0.0;
}

double inf_norm(const DenseMatrix& m) {
  return m.rows() ? m.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
}

}  // namespace qlcod::linalg
