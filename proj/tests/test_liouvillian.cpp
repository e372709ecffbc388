#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qlcod/classical.hpp"
#include "qlcod/error.hpp"
#include "qlcod/liouvillian.hpp"
#include "qlcod/observables.hpp"

using namespace qlcod;
using namespace qlcod::linalg;

namespace {

// Independent construction of the model operators from explicit matrix elements.
struct Ops {
  DenseMatrix a1, a2, h;
};

Ops oracle_ops(const SystemParams& p, int n) {
  DenseMatrix a = DenseMatrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  Ops o;
  o.a1 = DenseMatrix::Zero(n * n, n * n);
  o.a2 = DenseMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          o.a1(i * n + k, j * n + l) = a(i, j) * id(k, l);
          o.a2(i * n + k, j * n + l) = id(i, j) * a(k, l);
        }
  const Complex I(0, 1);
  const DenseMatrix c1 = o.a1.adjoint(), c2 = o.a2.adjoint();
  o.h = p.omega * (c1 * o.a1 + c2 * o.a2) + 0.5 * p.kerr * (c1 * c1 * o.a1 * o.a1 + c2 * c2 * o.a2 * o.a2) -
        I * p.epsilon * (c1 * c2 - o.a1 * o.a2) +
        0.5 * I * p.epsilon * (c1 * c1 + c2 * c2 - o.a1 * o.a1 - o.a2 * o.a2);
  return o;
}

DenseMatrix dissipate(const DenseMatrix& c, const DenseMatrix& rho) {
  const DenseMatrix cdc = c.adjoint() * c;
  return c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
}

DenseMatrix oracle_rhs(const SystemParams& p, const Ops& o, const DenseMatrix& rho) {
  const Complex I(0, 1);
  DenseMatrix out = -I * (o.h * rho - rho * o.h);
  out += p.k1 * (dissipate(o.a1.adjoint(), rho) + dissipate(o.a2.adjoint(), rho));
  out += p.k2 * (dissipate(o.a1 * o.a1, rho) + dissipate(o.a2 * o.a2, rho));
  return out;
}

// Single-site populations at eps = 0 from the classical rate equations of
// one-phonon gain and two-phonon loss on the truncated ladder.
std::vector<double> rate_equation_populations(double k1, double k2, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (k + 1 < n) {
      m(k + 1, k) += k1 * (k + 1);
      m(k, k) -= k1 * (k + 1);
    }
    if (k >= 2) {
      m(k - 2, k) += k2 * k * (k - 1);
      m(k, k) -= k2 * k * (k - 1);
    }
  }
  m.row(0).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[0] = 1.0;
  const Eigen::VectorXd p = m.fullPivLu().solve(rhs);
  return {p.data(), p.data() + n};
}

}  // namespace

TEST_SUITE("liouvillian") {

TEST_CASE("Hamiltonian matches the term-by-term oracle") {
  const SystemParams p{2.0, 1.0, 0.2, 1.3, 0.7};
  const FockSpace s(5);
  const Ops o = oracle_ops(p, 5);
  const DenseMatrix h = to_dense(build_hamiltonian(p, s));
  CHECK((h - o.h).norm() < 1e-12);
  CHECK(max_asymmetry(h) < 1e-14);
}

TEST_CASE("Liouvillian action matches the term-by-term oracle") {
  std::mt19937 rng(11);
  const SystemParams p{1.7, 0.8, 0.45, 0.9, 1.2};
  const int n = 4;
  const FockSpace s(n);
  const Ops o = oracle_ops(p, n);
  const Superoperator l = build_liouvillian(p, s);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMatrix rho = testing::random_density(n * n, rng);
    CHECK((apply(l, rho) - oracle_rhs(p, o, rho)).norm() < 1e-11);
  }
}

TEST_CASE("trace and Hermiticity preservation on random states") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemParams p{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const FockSpace s(4);
    const Superoperator l = build_liouvillian(p, s);
    const DenseMatrix rho = testing::random_density(16, rng);
    const DenseMatrix d = apply(l, rho);
    CHECK(std::abs(d.trace()) < 1e-12 * (1.0 + d.norm()));
    CHECK(max_asymmetry(d) < 1e-12 * (1.0 + d.norm()));
  }
}

TEST_CASE("steady state is a valid density matrix annihilated by L") {
  const SystemParams p{2.0, 1.0, 0.2, 1.0, 1.5};
  const FockSpace s(6);
  const Superoperator l = build_liouvillian(p, s);
  const SteadyState ss = steady_state(l);
  CHECK(ss.residual < 1e-10);
  CHECK(ss.parity_reduced);
  CHECK(ss.exchange_reduced);
  CHECK_NOTHROW(ss.rho.validate(1e-8));
  CHECK(ss.rho.min_eigenvalue() >= -1e-8);
  CHECK(apply(l, ss.rho).norm() < 1e-10);
}

TEST_CASE("symmetry-reduced solve agrees with the full solve") {
  const SystemParams p{2.0, 1.0, 3.0, 1.0, 2.0};
  const FockSpace s(5);
  const Superoperator l = build_liouvillian(p, s);
  const SteadyState reduced = steady_state(l);
  const SteadyState full = steady_state(l, {.use_symmetries = false});
  CHECK_FALSE(full.parity_reduced);
  CHECK(full.system_size == 625);
  CHECK(reduced.system_size < full.system_size / 3);
  CHECK((reduced.rho.matrix() - full.rho.matrix()).norm() < 1e-10);
}

TEST_CASE("uncoupled populations follow the rate equations") {
  for (double k2 : {0.2, 3.0}) {
    const SystemParams p{2.0, 1.0, k2, 1.0, 0.0};
    const int n = 7;
    const SteadyState ss = steady_state(build_liouvillian(p, FockSpace(n)));
    const auto expected = rate_equation_populations(1.0, k2, n);
    const auto got = fock_distribution(ss.rho, 1);
    for (int k = 0; k < n; ++k) CHECK(got.probabilities[k] == doctest::Approx(expected[k]).epsilon(1e-9));
    // no coherences between Fock levels of one site
    const DensityMatrix r1 = partial_trace(ss.rho, 1);
    const DenseMatrix offdiag = r1.matrix() - DenseMatrix(r1.matrix().diagonal().asDiagonal());
    CHECK(offdiag.norm() < 1e-10);
  }
}

TEST_CASE("Ehrenfest: <a1> evolves by the classical amplitude equation") {
  const SystemParams p{2.0, 1.0, 0.2, 1.0, 0.8};
  const int n = 20;
  const FockSpace s(n);
  const Superoperator l = build_liouvillian(p, s);
  const DenseMatrix a1 = to_dense(embed(annihilation(s.single_site()), 1, s));
  for (auto [b1, b2] : {std::pair{Complex(0.3, -0.2), Complex(-0.1, 0.4)}, std::pair{Complex(0.6, 0.1), Complex(0.2, -0.5)}}) {
    const Vector psi = kron(DenseMatrix(testing::coherent(b1, n)), DenseMatrix(testing::coherent(b2, n)));
    const DensityMatrix rho = DensityMatrix::pure(psi, s);
    const Complex quantum = (a1 * apply(l, rho)).trace();
    const Complex classical = rhs_amplitude(b1, b2, p).first;
    CHECK(std::abs(quantum - classical) < 1e-4);
  }
}

TEST_CASE("pure Hamiltonian dynamics has no unique steady state") {
  const FockSpace s(3);
  const SparseMatrix h = build_hamiltonian(SystemParams{}, s);
  const Superoperator l = lindblad_superoperator(h, std::span<const Dissipator>{}, s);
  try {
    steady_state(l);
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Singular);
  }
}

TEST_CASE("time evolution relaxes to the steady state") {
  const SystemParams p{2.0, 1.0, 3.0, 1.0, 1.0};
  const FockSpace s(4);
  const Superoperator l = build_liouvillian(p, s);
  const double dt = 0.5 * stability_bound(l);
  const Trajectory tr = evolve(DensityMatrix::vacuum(s), l, 30.0, dt, 100);
  CHECK(tr.states.size() >= 2);
  CHECK(tr.times.back() == doctest::Approx(30.0));
  CHECK(tr.trace_drift < 1e-9);
  const SteadyState ss = steady_state(l);
  CHECK((tr.states.back().matrix() - ss.rho.matrix()).norm() < 1e-6);
}

TEST_CASE("time evolution rejects steps above the stability bound") {
  const FockSpace s(3);
  const Superoperator l = build_liouvillian(SystemParams{}, s);
  try {
    evolve(DensityMatrix::vacuum(s), l, 1.0, 10.0 * stability_bound(l));
    FAIL("expected StabilityBound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StabilityBound);
  }
}

TEST_CASE("spectral gap: one zero mode, then a finite gap") {
  const Superoperator l = build_liouvillian(SystemParams{}, FockSpace(4));
  const SpectralGap g = spectral_gap(l);
  CHECK(g.smallest < 1e-10);
  CHECK(g.second_smallest > 1e-3);
  CHECK_THROWS_AS(spectral_gap(build_liouvillian(SystemParams{}, FockSpace(8))), Error);
}

TEST_CASE("memory budget guards the superoperator build") {
  try {
    build_liouvillian(SystemParams{}, FockSpace(16), 1 << 20);
    FAIL("expected DimensionLimit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionLimit);
  }
}

TEST_CASE("truncation convergence in the deep regime") {
  const SystemParams p{2.0, 1.0, 3.0, 1.0, 0.0};
  const auto t = converge_truncation(p, 4, [](const DensityMatrix& r) { return mean_phonon(r, 1); }, 2, 1e-4, 12);
  CHECK(t.converged);
  CHECK(t.relative_change < 1e-4);
  CHECK(t.value == doctest::Approx(0.590089).epsilon(1e-4));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SystemParams({2.0, 0.0, 0.2, 1.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS(SystemParams({2.0, 1.0, 0.0, 1.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS(SystemParams({2.0, 1.0, 0.2, 1.0, -1.0}).validate(), Error);
  CHECK(SystemParams{}.regime() == Regime::Weak);
  CHECK(SystemParams({2.0, 1.0, 3.0, 1.0, 0.0}).regime() == Regime::Deep);
}

}  // TEST_SUITE
