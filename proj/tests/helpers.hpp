#pragma once

#include <complex>
#include <random>

#include "qlcod/fock.hpp"
#include "qlcod/liouvillian.hpp"

namespace testing {

using qlcod::linalg::Complex;
using qlcod::linalg::DenseMatrix;
using qlcod::linalg::Vector;

inline DenseMatrix random_density(int d, std::mt19937& rng) {
  std::normal_distribution<double> g;
  DenseMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  DenseMatrix r = a * a.adjoint();
  return r / r.trace().real();
}

inline DenseMatrix random_unitary(int d, std::mt19937& rng) {
  std::normal_distribution<double> g;
  DenseMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<DenseMatrix> qr(a);
  return qr.householderQ() * DenseMatrix::Identity(d, d);
}

// Coherent state |alpha> on n levels, renormalized after truncation.
inline Vector coherent(Complex alpha, int n) {
  Vector v(n);
  double fact = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) fact *= k;
    v[k] = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, k) / std::sqrt(fact);
  }
  return v / v.norm();
}

}  // namespace testing
