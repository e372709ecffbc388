#include "qlcod/fock.hpp"

#include <cmath>
#include <string>

#include "qlcod/error.hpp"

namespace qlcod {

using linalg::Index;
using linalg::SparseMatrix;

FockSpace::FockSpace(int n_max, int n_sites) : n_max_(n_max), n_sites_(n_sites), dim_(0) {
  if (n_max < 2) {
    throw Error(ErrorCode::InvalidArgument, "FockSpace: n_max must be >= 2, got " + std::to_string(n_max));
  }
  if (n_sites != 1 && n_sites != 2) {
    throw Error(ErrorCode::InvalidArgument,
                "FockSpace: only one or two sites are supported, got " + std::to_string(n_sites));
  }
  dim_ = n_sites == 1 ? Index{n_max} : Index{n_max} * n_max;
}

Index FockSpace::index(int n1, int n2) const {
  if (n1 < 0 || n1 >= n_max_ || n2 < 0 || n2 >= n_max_ || (n_sites_ == 1 && n2 != 0)) {
    throw Error(ErrorCode::InvalidArgument, "FockSpace::index: level out of range");
  }
  return n_sites_ == 1 ? Index{n1} : Index{n1} * n_max_ + n2;
}

int FockSpace::level(Index index, int site) const {
  if (n_sites_ == 1) return static_cast<int>(index);
  return site == 1 ? static_cast<int>(index / n_max_) : static_cast<int>(index % n_max_);
}

SparseMatrix annihilation(const FockSpace& space) {
  const int n = space.n_max();
  SparseMatrix a(n, n);
  a.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int k = 1; k < n; ++k) a.insert(k - 1, k) = std::sqrt(static_cast<double>(k));
  a.makeCompressed();
  return a;
}

SparseMatrix creation(const FockSpace& space) { return SparseMatrix(annihilation(space).adjoint()); }

SparseMatrix number_operator(const FockSpace& space) {
  const SparseMatrix a = annihilation(space);
  return SparseMatrix(a.adjoint() * a);
}

SparseMatrix embed(const SparseMatrix& op, int site, const FockSpace& space) {
  const int n = space.n_max();
  if (op.rows() != n || op.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "embed: operator is not n_max x n_max");
  }
  if (space.n_sites() == 1) {
    if (site != 1) throw Error(ErrorCode::InvalidArgument, "embed: single-site space has only site 1");
    return op;
  }
  const SparseMatrix id = linalg::sparse_identity(n);
  if (site == 1) return linalg::kron(op, id);
  if (site == 2) return linalg::kron(id, op);
  throw Error(ErrorCode::InvalidArgument, "embed: site must be 1 or 2, got " + std::to_string(site));
}

linalg::DenseMatrix embed(const linalg::DenseMatrix& op, int site, const FockSpace& space) {
  return linalg::to_dense(embed(linalg::to_sparse(op), site, space));
}

}  // namespace qlcod
