#pragma once

#include "qlcod/linalg.hpp"

namespace qlcod {

/// Truncated Fock space of one or two identical bosonic modes.
///
/// Levels 0..n_max-1 per mode. Two-mode basis states |n1> (x) |n2> are
/// ordered with site 1 as the slow index: index = n1 * n_max + n2.
class FockSpace {
 public:
  explicit FockSpace(int n_max, int n_sites = 2);

  int n_max() const noexcept { return n_max_; }
  int n_sites() const noexcept { return n_sites_; }
  linalg::Index dim() const noexcept { return dim_; }

  linalg::Index index(int n1, int n2) const;
  int level(linalg::Index index, int site) const;

  FockSpace single_site() const { return FockSpace(n_max_, 1); }

  friend bool operator==(const FockSpace&, const FockSpace&) = default;

 private:
  int n_max_;
  int n_sites_;
  linalg::Index dim_;
};

/// Single-site ladder operators, n_max x n_max: a[k-1, k] = sqrt(k).
linalg::SparseMatrix annihilation(const FockSpace& space);
linalg::SparseMatrix creation(const FockSpace& space);
linalg::SparseMatrix number_operator(const FockSpace& space);

/// Embeds a single-site operator: site 1 -> op (x) I, site 2 -> I (x) op.
linalg::SparseMatrix embed(const linalg::SparseMatrix& op, int site, const FockSpace& space);
linalg::DenseMatrix embed(const linalg::DenseMatrix& op, int site, const FockSpace& space);

}  // namespace qlcod
