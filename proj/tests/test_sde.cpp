#include <doctest.h>

#include <random>

#include "qlcod/error.hpp"
#include "qlcod/sde.hpp"

using namespace qlcod;

namespace {

SystemParams weak(double eps = 0.0) { return {2.0, 1.0, 0.2, 1.0, eps}; }

SdeConfig short_config() {
  SdeConfig c;
  c.dt = 1e-3;
  c.n_steps = 20'000;
  c.n_trajectories = 4;
  c.base_seed = 7;
  return c;
}

}  // namespace

TEST_SUITE("sde") {

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{~0u, ~0u, ~0u, ~0u}, K{~0u, ~0u}) == C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("Gaussian draws have unit variance and depend on every input") {
  double sum = 0.0, sq = 0.0;
  const int n = 50'000;
  for (int k = 0; k < n; ++k)
    for (double v : gaussian4(1, 0, k)) {
      sum += v;
      sq += v * v;
    }
  CHECK(std::abs(sum / (4 * n)) < 0.01);
  CHECK(sq / (4 * n) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(gaussian4(1, 0, 5) != gaussian4(2, 0, 5));
  CHECK(gaussian4(1, 0, 5) != gaussian4(1, 1, 5));
  CHECK(gaussian4(1, 0, 5) != gaussian4(1, 0, 6));
  CHECK(gaussian4(1, 0, 5) == gaussian4(1, 0, 5));
}

TEST_CASE("drift is the classical field with shifted radii") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const SystemParams p{2.0 + u(rng), 1.0, 0.2 + 0.05 * k, 1.0 + u(rng), 0.2 * k};
    const ClassicalState s{u(rng), u(rng), u(rng), u(rng)};
    // rhs evaluates r^2 internally; reproduce r^2 - 1 by hand from its pieces
    const double g = 0.5 * p.k1;
    const double q1 = s.r1_sq() - 1.0, q2 = s.r2_sq() - 1.0;
    const ClassicalState expected{
        p.omega * s.y1 + g * s.x1 - p.k2 * q1 * s.x1 + p.kerr * q1 * s.y1 - p.epsilon * (s.x2 - s.x1),
        -p.omega * s.x1 + g * s.y1 - p.k2 * q1 * s.y1 - p.kerr * q1 * s.x1 + p.epsilon * (s.y2 - s.y1),
        p.omega * s.y2 + g * s.x2 - p.k2 * q2 * s.x2 + p.kerr * q2 * s.y2 - p.epsilon * (s.x1 - s.x2),
        -p.omega * s.x2 + g * s.y2 - p.k2 * q2 * s.y2 - p.kerr * q2 * s.x2 + p.epsilon * (s.y1 - s.y2)};
    CHECK((drift(s, p).vec() - expected.vec()).norm() < 1e-12);
  }
  CHECK(drift({}, weak(2.0)).norm() == 0.0);
}

TEST_CASE("radial drift vanishes on the shifted limit cycle") {
  const double r = std::sqrt(3.5);
  const ClassicalState s{r * std::cos(0.4), r * std::sin(0.4), 0.0, 0.0};
  const ClassicalState d = drift(s, weak(0.0));
  CHECK(std::abs(s.x1 * d.x1 + s.y1 * d.y1) < 1e-12);
}

TEST_CASE("first-order Fokker-Planck term: drift matches the amplitude form with shifted radii") {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 10; ++k) {
    const SystemParams p = weak(0.3 * k);
    const ClassicalState s{u(rng), u(rng), u(rng), u(rng)};
    // the drift of alpha_j: (-i(w + K(|a|^2-1)) + k1/2 - k2(|a|^2-1)) a + eps (conj a_j - conj a_j')
    const std::complex<double> a1(s.x1, s.y1), a2(s.x2, s.y2), i(0, 1);
    const double q1 = std::norm(a1) - 1.0;
    const auto expected = (-i * (p.omega + p.kerr * q1) + 0.5 * p.k1 - p.k2 * q1) * a1 + p.epsilon * (std::conj(a1) - std::conj(a2));
    const ClassicalState d = drift(s, p);
    CHECK(std::abs(expected - std::complex<double>(d.x1, d.y1)) < 1e-12);
  }
}

TEST_CASE("diffusion amplitudes") {
  const auto origin = diffusion({}, weak());
  for (double v : origin) CHECK(v == doctest::Approx(std::sqrt(0.15)).epsilon(1e-14));
  const auto d = diffusion({0.5, 0.0, 0.0, 0.0}, weak());
  CHECK(d[0] == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));  // nu_1 = 0.4
  CHECK(d[2] == doctest::Approx(std::sqrt(0.15)).epsilon(1e-14));
  try {
    diffusion({}, {2.0, 1.0, 3.0, 1.0, 0.0});
    FAIL("expected RegimeViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RegimeViolation);
  }
}

TEST_CASE("zero noise with Euler-Maruyama is the explicit Euler flow of the drift") {
  SdeConfig c = short_config();
  c.scheme = SdeScheme::EulerMaruyama;
  c.noise_scale = 0.0;
  c.n_steps = 1000;
  const ClassicalState x0{1.0, 0.2, -0.5, 0.7};
  const SdeTrajectory t = simulate(weak(0.5), c, x0);
  Eigen::Vector4d v = x0.vec();
  for (int n = 0; n < 1000; ++n) v += c.dt * drift(ClassicalState::from(v), weak(0.5)).vec();
  CHECK((t.states.back().vec() - v).norm() == 0.0);
}

TEST_CASE("zero noise settles on the shifted limit cycle") {
  SdeConfig c = short_config();
  c.noise_scale = 0.0;
  c.n_trajectories = 1;
  c.n_steps = 100'000;
  const EnsembleResult r = ensemble_amplitude(weak(0.0), c);
  CHECK(r.mean == doctest::Approx(3.5).epsilon(1e-8));
  CHECK(r.std_err == 0.0);
}

TEST_CASE("trajectories are reproducible and thread-count independent") {
  const SdeConfig c = short_config();
  const SdeTrajectory a = simulate(weak(1.0), c, c.initial, 3, 1000);
  const SdeTrajectory b = simulate(weak(1.0), c, c.initial, 3, 1000);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK(a.states[k] == b.states[k]);
  const SdeTrajectory other = simulate(weak(1.0), c, c.initial, 4, 1000);
  CHECK_FALSE(other.states.back() == a.states.back());

  const EnsembleResult one = ensemble_amplitude(weak(1.0), c, 1);
  const EnsembleResult many = ensemble_amplitude(weak(1.0), c, 3);
  CHECK(one.mean == many.mean);
  CHECK(one.std_err == many.std_err);
  CHECK(one.trajectory_means == many.trajectory_means);
}

TEST_CASE("configuration invariants") {
  SdeConfig c = short_config();
  c.dt = 0.05;
  CHECK_THROWS_AS(c.validate(weak()), Error);
  c = short_config();
  c.n_trajectories = 0;
  CHECK_THROWS_AS(c.validate(weak()), Error);
  c = short_config();
  c.transient_fraction = 1.0;
  CHECK_THROWS_AS(c.validate(weak()), Error);
  const SdeConfig d = SdeConfig::defaults({2.0, 2.0, 0.2, 1.0, 0.0});
  CHECK(d.dt == doctest::Approx(5e-4));
  CHECK(d.n_trajectories == 200);
  CHECK(d.transient_fraction == 0.5);
  CHECK(static_cast<double>(d.n_steps) * d.dt == doctest::Approx(250.0));
}

}  // TEST_SUITE
