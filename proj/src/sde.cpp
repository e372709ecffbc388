#include "qlcod/sde.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <numbers>

#include "parallel.hpp"
#include "qlcod/error.hpp"

namespace qlcod {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = std::uint64_t{a} * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

// Neumaier summation
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

using Vec4 = Eigen::Vector4d;

Vec4 drift_vec(const Vec4& v, const SystemParams& p) { return drift(ClassicalState::from(v), p).vec(); }

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

std::array<double, 4> gaussian4(std::uint64_t seed, std::uint64_t stream, std::uint64_t step) noexcept {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                                static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto bits = Philox4x32::block(ctr, key);
  constexpr double scale = 1.0 / 4294967296.0;
  std::array<double, 4> out;
  for (int pair = 0; pair < 2; ++pair) {
    const double u1 = (bits[2 * pair] + 0.5) * scale;  // (0, 1)
    const double u2 = (bits[2 * pair + 1] + 0.5) * scale;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[2 * pair] = radius * std::cos(angle);
    out[2 * pair + 1] = radius * std::sin(angle);
  }
  return out;
}

const char* to_string(SdeScheme s) noexcept {
  switch (s) {
    case SdeScheme::EulerMaruyama: return "euler-maruyama";
    case SdeScheme::SplitRk4: return "split-rk4";
  }
  return "unknown";
}

SdeConfig SdeConfig::defaults(const SystemParams& p) {
  SdeConfig c;
  c.dt = 1e-3 / p.k1;
  c.n_steps = 500'000;
  return c;
}

void SdeConfig::validate(const SystemParams& p) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "sde: dt must be positive");
  if (dt * p.k1 > 1e-2 * (1.0 + 1e-12))
    throw Error(ErrorCode::StabilityBound, "sde: dt * k1 must not exceed 1e-2");
  if (n_steps == 0) throw Error(ErrorCode::InvalidArgument, "sde: n_steps must be positive");
  if (n_trajectories == 0) throw Error(ErrorCode::InvalidArgument, "sde: n_trajectories must be at least 1");
  if (!(transient_fraction >= 0.0 && transient_fraction < 1.0))
    throw Error(ErrorCode::InvalidArgument, "sde: transient_fraction must lie in [0, 1)");
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
    throw Error(ErrorCode::InvalidArgument, "sde: noise_scale must be finite and non-negative");
  if (!initial.finite()) throw Error(ErrorCode::InvalidArgument, "sde: initial state is not finite");
}

ClassicalState drift(const ClassicalState& s, const SystemParams& p) {
  const double r1 = s.r1_sq() - 1.0;
  const double r2 = s.r2_sq() - 1.0;
  const double g = 0.5 * p.k1;
  return {
      (p.omega + p.kerr * r1) * s.y1 + (g - p.k2 * r1 + p.epsilon) * s.x1 - p.epsilon * s.x2,
      (-p.omega - p.kerr * r1) * s.x1 + (g - p.k2 * r1 - p.epsilon) * s.y1 + p.epsilon * s.y2,
      (p.omega + p.kerr * r2) * s.y2 + (g - p.k2 * r2 + p.epsilon) * s.x2 - p.epsilon * s.x1,
      (-p.omega - p.kerr * r2) * s.x2 + (g - p.k2 * r2 - p.epsilon) * s.y2 + p.epsilon * s.y1,
  };
}

std::array<double, 4> diffusion(const ClassicalState& s, const SystemParams& p) {
  const double nu1 = 0.5 * p.k1 + p.k2 * (2.0 * s.r1_sq() - 1.0);
  const double nu2 = 0.5 * p.k1 + p.k2 * (2.0 * s.r2_sq() - 1.0);
  if (nu1 < 0.0 || nu2 < 0.0)
    throw Error(ErrorCode::RegimeViolation,
                "sde: negative diffusion (nu = " + std::to_string(std::min(nu1, nu2)) +
                    "); the noisy classical model needs the weak quantum regime k1 > k2");
  const double a = std::sqrt(0.5 * nu1), b = std::sqrt(0.5 * nu2);
  return {a, a, b, b};
}

namespace {

// Advances one step; `n` is the step number used as the generator counter.
Vec4 step(const Vec4& v, const SystemParams& p, const SdeConfig& cfg, std::uint64_t index, std::uint64_t n) {
  const double dt = cfg.dt;
  Vec4 next;
  if (cfg.scheme == SdeScheme::EulerMaruyama) {
    next = v + dt * drift_vec(v, p);
  } else {
    const Vec4 a = drift_vec(v, p);
    const Vec4 b = drift_vec(v + 0.5 * dt * a, p);
    const Vec4 c = drift_vec(v + 0.5 * dt * b, p);
    const Vec4 d = drift_vec(v + dt * c, p);
    next = v + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d);
  }
  if (cfg.noise_scale > 0.0) {
    const auto sigma = diffusion(ClassicalState::from(v), p);
    const auto xi = gaussian4(cfg.base_seed, index, n);
    const double sq = std::sqrt(dt) * cfg.noise_scale;
    for (int k = 0; k < 4; ++k) next[k] += sigma[k] * sq * xi[k];
  }
  if (!next.allFinite() || next.norm() > 1e6)
    throw Error(ErrorCode::Divergence, "sde: trajectory " + std::to_string(index) + " diverged at step " +
                                           std::to_string(n));
  return next;
}

}  // namespace

SdeTrajectory simulate(const SystemParams& p, const SdeConfig& cfg, const ClassicalState& initial,
                       std::uint64_t index, std::uint64_t record_every) {
  p.validate();
  cfg.validate(p);
  SdeTrajectory out;
  Vec4 v = initial.vec();
  out.times.push_back(0.0);
  out.states.push_back(initial);
  for (std::uint64_t n = 0; n < cfg.n_steps; ++n) {
    v = step(v, p, cfg, index, n);
    const bool last = n + 1 == cfg.n_steps;
    if (last || (record_every > 0 && (n + 1) % record_every == 0)) {
      out.times.push_back(static_cast<double>(n + 1) * cfg.dt);
      out.states.push_back(ClassicalState::from(v));
    }
  }
  return out;
}

EnsembleResult ensemble_amplitude(const SystemParams& p, const SdeConfig& cfg, unsigned threads) {
  p.validate();
  cfg.validate(p);
  const auto first = static_cast<std::uint64_t>(std::floor(cfg.transient_fraction * cfg.n_steps));
  EnsembleResult r;
  r.trajectory_means.assign(cfg.n_trajectories, 0.0);
  std::vector<std::exception_ptr> errors(cfg.n_trajectories);
  detail::parallel_for(cfg.n_trajectories, threads, [&](std::size_t i) {
    try {
      Vec4 v = cfg.initial.vec();
      Accumulator acc;
      for (std::uint64_t n = 0; n < cfg.n_steps; ++n) {
        v = step(v, p, cfg, i, n);
        if (n + 1 > first) acc.add(v[0] * v[0] + v[1] * v[1]);
      }
      r.trajectory_means[i] = acc.value() / static_cast<double>(cfg.n_steps - first);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Accumulator total;
  for (double m : r.trajectory_means) total.add(m);
  r.mean = total.value() / cfg.n_trajectories;
  if (cfg.n_trajectories > 1) {
    Accumulator var;
    for (double m : r.trajectory_means) var.add((m - r.mean) * (m - r.mean));
    r.std_err = std::sqrt(var.value() / (cfg.n_trajectories - 1) / cfg.n_trajectories);
  }
  return r;
}

}  // namespace qlcod
