#include <doctest.h>

#include "qlcod/error.hpp"
#include "qlcod/fock.hpp"

using namespace qlcod;
using namespace qlcod::linalg;

TEST_SUITE("fock") {

TEST_CASE("ladder operators") {
  const FockSpace s(5, 1);
  const DenseMatrix a = to_dense(annihilation(s));
  for (int k = 1; k < 5; ++k) CHECK(a(k - 1, k).real() == doctest::Approx(std::sqrt(k)));
  CHECK((a.adjoint() - to_dense(creation(s))).norm() == 0.0);
  const DenseMatrix n = to_dense(number_operator(s));
  for (int k = 0; k < 5; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
  // [a, a^dagger] = 1 except on the top level, where truncation gives 1 - n_max
  const DenseMatrix comm = a * a.adjoint() - a.adjoint() * a;
  for (int k = 0; k < 4; ++k) CHECK(comm(k, k).real() == doctest::Approx(1.0));
  CHECK(comm(4, 4).real() == doctest::Approx(-4.0));
}

TEST_CASE("basis ordering puts site 1 as the slow index") {
  const FockSpace s(4);
  CHECK(s.dim() == 16);
  CHECK(s.index(0, 0) == 0);
  CHECK(s.index(0, 3) == 3);
  CHECK(s.index(1, 0) == 4);
  CHECK(s.index(2, 3) == 11);
  for (Index i = 0; i < s.dim(); ++i) CHECK(s.index(s.level(i, 1), s.level(i, 2)) == i);
}

TEST_CASE("embedded number operators count the right site") {
  const FockSpace s(3);
  const SparseMatrix n = number_operator(s.single_site());
  const DenseMatrix n1 = to_dense(embed(n, 1, s));
  const DenseMatrix n2 = to_dense(embed(n, 2, s));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      CHECK(n1(s.index(a, b), s.index(a, b)).real() == doctest::Approx(a));
      CHECK(n2(s.index(a, b), s.index(a, b)).real() == doctest::Approx(b));
    }
  CHECK((embed(DenseMatrix(to_dense(n)), 1, s) - n1).norm() == 0.0);
}

TEST_CASE("operators on different sites commute") {
  const FockSpace s(4);
  const SparseMatrix a = annihilation(s.single_site());
  const DenseMatrix a1 = to_dense(embed(a, 1, s));
  const DenseMatrix a2 = to_dense(embed(a, 2, s));
  CHECK((a1 * a2.adjoint() - a2.adjoint() * a1).norm() < 1e-14);
}

TEST_CASE("invalid spaces") {
  CHECK_THROWS_AS(FockSpace(1), Error);
  CHECK_THROWS_AS(FockSpace(4, 3), Error);
  const FockSpace s(3);
  CHECK_THROWS_AS(s.index(3, 0), Error);
  CHECK_THROWS_AS(embed(annihilation(s.single_site()), 3, s), Error);
}

}  // TEST_SUITE
