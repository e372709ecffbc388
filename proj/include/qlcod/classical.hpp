#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qlcod/params.hpp"

namespace qlcod {

/// Quadratures of both oscillators, alpha_j = x_j + i y_j.
struct ClassicalState {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  Eigen::Vector4d vec() const { return {x1, y1, x2, y2}; }
  static ClassicalState from(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

  double norm() const { return vec().norm(); }
  double r1_sq() const { return x1 * x1 + y1 * y1; }
  double r2_sq() const { return x2 * x2 + y2 * y2; }
  bool finite() const;

  friend bool operator==(const ClassicalState&, const ClassicalState&) = default;
};

using VectorField = std::function<ClassicalState(const ClassicalState&)>;

/// Right-hand side of the coupled Stuart-Landau pair with attractive-repulsive coupling:
///   x_j' =  w y_j + (k1/2) x_j - k2 r_j^2 x_j + K r_j^2 y_j - eps (x_j' - x_j)
///   y_j' = -w x_j + (k1/2) y_j - k2 r_j^2 y_j - K r_j^2 x_j + eps (y_j' - y_j)
ClassicalState rhs(const ClassicalState& s, const SystemParams& p);

/// Same dynamics in complex amplitude form:
///   alpha_j' = (-i w + k1/2 - (k2 + i K)|alpha_j|^2) alpha_j + eps (conj(alpha_j) - conj(alpha_j'))
std::pair<std::complex<double>, std::complex<double>> rhs_amplitude(std::complex<double> alpha1,
                                                                    std::complex<double> alpha2,
                                                                    const SystemParams& p);

/// Analytic Jacobian of rhs at s.
Eigen::Matrix4d jacobian(const ClassicalState& s, const SystemParams& p);
Eigen::Matrix4d trivial_jacobian(const SystemParams& p);

/// Closed-form eigenvalues at the origin.
/// Order: lambda1 = (k1 + 2iw)/2, lambda2 = (k1 - 2iw)/2, lambda3 = (k1 + 2s)/2, lambda4 = (k1 - 2s)/2.
std::array<std::complex<double>, 4> trivial_eigenvalues(const SystemParams& p);
std::array<std::complex<double>, 4> trivial_eigenvalues_numeric(const SystemParams& p);

/// Coupling strength where lambda4 crosses zero: sqrt(k1^2 + 4 w^2) / 4.
double pitchfork_epsilon(const SystemParams& p);

/// Inhomogeneous steady states (x, y, -x, -y). Empty below the pitchfork or
/// when no candidate converges to |rhs| < 1e-9.
std::vector<ClassicalState> ihss_branch(const SystemParams& p);

/// Newton iteration on rhs starting at s; nullopt unless |rhs| < tol.
std::optional<ClassicalState> polish_fixed_point(const ClassicalState& s, const SystemParams& p, double tol = 1e-12,
                                                 int max_iter = 50);

enum class AttractorKind { LimitCycle, SteadyState, Divergent };

const char* to_string(AttractorKind k) noexcept;

struct AttractorOptions {
  double t_transient = 200.0;  // in units of 1/k1
  double t_measure = 100.0;    // in units of 1/k1
  double dt = 0.01;            // in units of 1/k1
  double lc_threshold = 1e-3;  // peak-to-peak of x1
  double divergence = 1e6;
};

struct Attractor {
  AttractorKind kind = AttractorKind::SteadyState;
  double amplitude = 0.0;      // peak-to-peak of x1 over the measurement window
  double mean_r1_sq = 0.0;     // time average of x1^2 + y1^2 over the window
  ClassicalState state;        // final state; the polished fixed point for steady states
  double residual = 0.0;       // |rhs(state)| for steady states
};

/// Fixed-step RK4 on rhs, or on `field` when given. Steady states are
/// Newton-polished and are only reported with |rhs| < 1e-6.
Attractor classify_attractor(const SystemParams& p, const ClassicalState& initial, const AttractorOptions& options = {},
                             const VectorField& field = {});

/// Integrates `field` (or rhs) with RK4 for t_final and returns the end state.
ClassicalState integrate(const SystemParams& p, const ClassicalState& initial, double t_final, double dt,
                         const VectorField& field = {});

enum class SweepParameter { EpsilonOverK1, Kerr };
enum class SweepDirection { Forward, Backward };

struct ClassicalSweepPoint {
  double value = 0.0;
  std::optional<Attractor> attractor;
  std::string error;
};

struct ClassicalSweepOptions {
  SweepParameter parameter = SweepParameter::EpsilonOverK1;
  SweepDirection direction = SweepDirection::Forward;
  bool continuation = true;  // next point starts from the previous final state
  ClassicalState initial{1.2, 0.4, -0.9, 0.7};
  AttractorOptions attractor;
};

/// Classification table over an ascending value list. Backward sweeps visit
/// the values from the top down; the table is always in input order.
std::vector<ClassicalSweepPoint> classical_sweeps(const SystemParams& base, const std::vector<double>& values,
                                                  const ClassicalSweepOptions& options = {});

}  // namespace qlcod
