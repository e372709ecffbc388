#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qlcod/error.hpp"
#include "qlcod/observables.hpp"

using namespace qlcod;
using namespace qlcod::linalg;

TEST_SUITE("observables") {

TEST_CASE("embedded Bell state has negativity 1/2") {
  const FockSpace s(3);
  Vector psi = Vector::Zero(9);
  psi[s.index(0, 0)] = psi[s.index(1, 1)] = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::pure(psi, s);
  CHECK(negativity(rho) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(renyi2(partial_trace(rho, 1)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("product states are not entangled") {
  std::mt19937 rng(23);
  const FockSpace s(4);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix r1 = testing::random_density(4, rng);
    const DenseMatrix r2 = testing::random_density(4, rng);
    const DensityMatrix rho(kron(r1, r2), s);
    CHECK(std::abs(negativity(rho)) < 1e-9);
    CHECK((partial_trace(rho, 1).matrix() - r1).norm() < 1e-12);
    CHECK((partial_trace(rho, 2).matrix() - r2).norm() < 1e-12);
  }
}

TEST_CASE("partial transpose swaps the site-1 indices only") {
  std::mt19937 rng(29);
  const FockSpace s(3);
  const DensityMatrix rho(testing::random_density(9, rng), s);
  const DenseMatrix pt = partial_transpose(rho, 1);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      for (int mp = 0; mp < 3; ++mp)
        for (int np = 0; np < 3; ++np)
          CHECK(pt(s.index(m, n), s.index(mp, np)) == rho.matrix()(s.index(mp, n), s.index(m, np)));
  // transposing both sites is the full transpose
  const DensityMatrix once(pt, s);
  CHECK((partial_transpose(once, 2) - rho.matrix().transpose()).norm() < 1e-15);
}

TEST_CASE("Renyi-2 entropy") {
  std::mt19937 rng(31);
  const FockSpace single(5, 1);
  CHECK(renyi2(DensityMatrix::vacuum(single)) == doctest::Approx(0.0));
  const DensityMatrix mixed(DenseMatrix::Identity(5, 5) / 5.0, single);
  CHECK(renyi2(mixed) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  const DenseMatrix r = testing::random_density(5, rng);
  const double base = renyi2(DensityMatrix(r, single));
  CHECK(base > 0.0);
  for (int k = 0; k < 5; ++k) {
    const DenseMatrix u = testing::random_unitary(5, rng);
    CHECK(std::abs(renyi2(DensityMatrix(u * r * u.adjoint(), single)) - base) < 1e-10);
  }
}

TEST_CASE("mean phonon number and Fock distribution") {
  const FockSpace s(4);
  Vector psi = Vector::Zero(16);
  psi[s.index(2, 1)] = 1.0;
  const DensityMatrix rho = DensityMatrix::pure(psi, s);
  CHECK(mean_phonon(rho, 1) == doctest::Approx(2.0));
  CHECK(mean_phonon(rho, 2) == doctest::Approx(1.0));
  const auto d = fock_distribution(rho, 1);
  CHECK(d.sum() == doctest::Approx(1.0));
  CHECK(d.argmax() == 2);
  CHECK_THROWS_AS(mean_phonon(rho, 3), Error);
}

TEST_CASE("site symmetry of coupled steady states") {
  for (double eps : {0.0, 0.7, 2.5}) {
    const SystemParams p{2.0, 1.0, 0.6, 1.0, eps};
    const SteadyState ss = steady_state(build_liouvillian(p, FockSpace(6)));
    CHECK(std::abs(mean_phonon(ss.rho, 1) - mean_phonon(ss.rho, 2)) < 1e-7);
  }
}

TEST_CASE("uncoupled deep-regime steady state is mixed and unentangled") {
  const SystemParams p{2.0, 1.0, 3.0, 1.0, 0.0};
  const SteadyState ss = steady_state(build_liouvillian(p, FockSpace(8)));
  CHECK(std::abs(negativity(ss.rho)) < 1e-6);
  CHECK(renyi2(partial_trace(ss.rho, 1)) > 0.05);
}

TEST_CASE("two-site functions reject single-site states") {
  const FockSpace single(3, 1);
  CHECK_THROWS_AS(negativity(DensityMatrix::vacuum(single)), Error);
  CHECK_THROWS_AS(partial_trace(DensityMatrix::vacuum(single), 1), Error);
}

}  // TEST_SUITE
