#include "qlcod/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlcod/error.hpp"

namespace qlcod {

using linalg::Complex;
using linalg::DenseMatrix;
using linalg::Index;

namespace {

void require_two_sites(const DensityMatrix& rho, const char* who) {
  if (rho.space().n_sites() != 2) {
    throw Error(ErrorCode::InvalidArgument, std::string(who) + ": needs a two-site state");
  }
}

void require_site(int site, const DensityMatrix& rho, const char* who) {
  if (site < 1 || site > rho.space().n_sites()) {
    std::ostringstream os;
    os << who << ": site " << site << " out of range";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

}  // namespace

double FockDistribution::sum() const {
  double s = 0.0;
  for (double p : probabilities) s += p;
  return s;
}

std::size_t FockDistribution::argmax() const {
  return static_cast<std::size_t>(std::max_element(probabilities.begin(), probabilities.end()) -
                                  probabilities.begin());
}

double mean_phonon(const DensityMatrix& rho, int site) {
  require_site(site, rho, "mean_phonon");
  // The number operator is diagonal in the Fock basis.
  const auto& m = rho.matrix();
  Complex acc = 0.0;
  for (Index i = 0; i < m.rows(); ++i) acc += static_cast<double>(rho.space().level(i, site)) * m(i, i);
  return acc.real();
}

FockDistribution fock_distribution(const DensityMatrix& rho, int site) {
  require_site(site, rho, "fock_distribution");
  const auto& m = rho.matrix();
  FockDistribution out;
  out.probabilities.assign(static_cast<std::size_t>(rho.space().n_max()), 0.0);
  for (Index i = 0; i < m.rows(); ++i) {
    out.probabilities[static_cast<std::size_t>(rho.space().level(i, site))] += m(i, i).real();
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  require_two_sites(rho, "partial_trace");
  require_site(keep, rho, "partial_trace");
  const int n = rho.space().n_max();
  const auto& m = rho.matrix();
  DenseMatrix out = DenseMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += keep == 1 ? m(Index{a} * n + k, Index{b} * n + k) : m(Index{k} * n + a, Index{k} * n + b);
      }
      out(a, b) = acc;
    }
  }
  return {std::move(out), rho.space().single_site()};
}

DenseMatrix partial_transpose(const DensityMatrix& rho, int site) {
  require_two_sites(rho, "partial_transpose");
  require_site(site, rho, "partial_transpose");
  const int n = rho.space().n_max();
  const auto& m = rho.matrix();
  DenseMatrix out(m.rows(), m.cols());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          // m( (a b), (c d) ) with a, c on site 1 and b, d on site 2.
          const Complex v = m(Index{a} * n + b, Index{c} * n + d);
          if (site == 1) {
            out(Index{c} * n + b, Index{a} * n + d) = v;
          } else {
            out(Index{a} * n + d, Index{c} * n + b) = v;
          }
        }
      }
    }
  }
  return out;
}

double negativity(const DensityMatrix& rho) {
  // The partial transpose of a Hermitian matrix is Hermitian; steady states
  // are Hermitian to ~1e-15, so use the density-matrix tolerance here.
  return 0.5 * (linalg::trace_norm_hermitian(partial_transpose(rho, 1), 1e-8) - 1.0);
}

double renyi2(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  const double purity = m.cwiseAbs2().sum();
  if (!(purity > 0.0)) throw Error(ErrorCode::InvalidArgument, "renyi2: Tr(rho^2) is not positive");
  return -std::log(purity);
}

}  // namespace qlcod
