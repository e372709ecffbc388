#pragma once

#include <vector>

#include "qlcod/liouvillian.hpp"

namespace qlcod {

struct FockDistribution {
  std::vector<double> probabilities;  // p_n, n = 0..n_max-1

  double sum() const;
  std::size_t argmax() const;
};

/// Tr(rho a_site^dagger a_site).
double mean_phonon(const DensityMatrix& rho, int site);

FockDistribution fock_distribution(const DensityMatrix& rho, int site);

/// Reduced state of site `keep` (1 or 2) on the single-site space.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

/// Transposes the indices of `site`: rho[(m1 n2), (m1' n2')] -> rho[(m1' n2), (m1 n2')] for site 1.
linalg::DenseMatrix partial_transpose(const DensityMatrix& rho, int site);

/// (||rho^{T_1}||_1 - 1) / 2, from the full two-site state.
double negativity(const DensityMatrix& rho);

/// Second-order Renyi entropy -ln Tr(rho^2) of a (typically reduced) state.
double renyi2(const DensityMatrix& rho);

}  // namespace qlcod
