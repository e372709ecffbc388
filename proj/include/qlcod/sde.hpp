#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qlcod/classical.hpp"

namespace qlcod {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// Four independent standard normals for (seed, stream, step), via Box-Muller.
std::array<double, 4> gaussian4(std::uint64_t seed, std::uint64_t stream, std::uint64_t step) noexcept;

enum class SdeScheme {
  EulerMaruyama,  // X += mu dt + sigma sqrt(dt) xi
  SplitRk4,       // RK4 drift step, then sigma(X_n) sqrt(dt) xi; exact deterministic limit
};

const char* to_string(SdeScheme s) noexcept;

struct SdeConfig {
  double dt = 1e-3;                 // absolute time step
  std::uint64_t n_steps = 500'000;  // t_final = n_steps * dt
  std::uint32_t n_trajectories = 200;
  double transient_fraction = 0.5;
  std::uint64_t base_seed = 0;
  SdeScheme scheme = SdeScheme::SplitRk4;
  double noise_scale = 1.0;         // test hook; 0 gives the deterministic drift flow
  ClassicalState initial{1.5, 0.5, -1.0, 1.0};

  /// dt = 1e-3/k1, t_final = 500/k1, 200 trajectories, transient 0.5.
  static SdeConfig defaults(const SystemParams& p);

  /// Throws InvalidArgument / StabilityBound on violated invariants.
  void validate(const SystemParams& p) const;
};

/// Drift of the truncated Fokker-Planck equation: rhs() with every r_j^2 replaced by r_j^2 - 1.
ClassicalState drift(const ClassicalState& s, const SystemParams& p);

/// Diagonal noise amplitudes sqrt(nu_j / 2), nu_j = k1/2 + k2 (2 r_j^2 - 1), ordered (x1, y1, x2, y2).
/// Throws Error(RegimeViolation) when some nu_j < 0.
std::array<double, 4> diffusion(const ClassicalState& s, const SystemParams& p);

struct SdeTrajectory {
  std::vector<double> times;
  std::vector<ClassicalState> states;
};

/// One trajectory with stream `index`; records every `record_every`-th step
/// (and always the initial and final states).
SdeTrajectory simulate(const SystemParams& p, const SdeConfig& cfg, const ClassicalState& initial,
                       std::uint64_t index = 0, std::uint64_t record_every = 0);

struct EnsembleResult {
  double mean = 0.0;        // <|alpha_1|^2> over trajectories and post-transient samples
  double std_err = 0.0;     // standard error across trajectory means
  std::vector<double> trajectory_means;
};

/// Trajectory means are combined in index order, so the result does not
/// depend on `threads`.
EnsembleResult ensemble_amplitude(const SystemParams& p, const SdeConfig& cfg, unsigned threads = 1);

}  // namespace qlcod
