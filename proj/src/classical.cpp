#include "qlcod/classical.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "qlcod/error.hpp"

namespace qlcod {

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using cplx = std::complex<double>;

Vec4 field_vec(const VectorField& field, const SystemParams& p, const Vec4& v) {
  const ClassicalState s = ClassicalState::from(v);
  return (field ? field(s) : rhs(s, p)).vec();
}

Mat4 fd_jacobian(const VectorField& field, const SystemParams& p, const Vec4& v) {
  Mat4 j;
  for (int c = 0; c < 4; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(v[c]));
    Vec4 up = v, dn = v;
    up[c] += h;
    dn[c] -= h;
    j.col(c) = (field_vec(field, p, up) - field_vec(field, p, dn)) / (2.0 * h);
  }
  return j;
}

std::optional<ClassicalState> newton(const VectorField& field, const SystemParams& p, const ClassicalState& s0,
                                     double tol, int max_iter) {
  Vec4 v = s0.vec();
  for (int it = 0; it <= max_iter; ++it) {
    const Vec4 f = field_vec(field, p, v);
    if (!f.allFinite()) return std::nullopt;
    if (f.norm() < tol) return ClassicalState::from(v);
    if (it == max_iter) break;
    const Mat4 j = field ? fd_jacobian(field, p, v) : jacobian(ClassicalState::from(v), p);
    Eigen::FullPivLU<Mat4> lu(j);
    if (!lu.isInvertible()) return std::nullopt;
    v -= lu.solve(f);
  }
  // accept a tolerance-limited plateau
  const Vec4 f = field_vec(field, p, v);
  if (f.allFinite() && f.norm() < tol * 1e3) return ClassicalState::from(v);
  return std::nullopt;
}

Vec4 rk4_step(const VectorField& field, const SystemParams& p, const Vec4& v, double dt) {
  const Vec4 a = field_vec(field, p, v);
  const Vec4 b = field_vec(field, p, v + 0.5 * dt * a);
  const Vec4 c = field_vec(field, p, v + 0.5 * dt * b);
  const Vec4 d = field_vec(field, p, v + dt * c);
  return v + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d);
}

}  // namespace

bool ClassicalState::finite() const { return vec().allFinite(); }

ClassicalState rhs(const ClassicalState& s, const SystemParams& p) {
  const double r1 = s.r1_sq();
  const double r2 = s.r2_sq();
  const double g = 0.5 * p.k1;
  return {
      p.omega * s.y1 + g * s.x1 - p.k2 * r1 * s.x1 + p.kerr * r1 * s.y1 - p.epsilon * (s.x2 - s.x1),
      -p.omega * s.x1 + g * s.y1 - p.k2 * r1 * s.y1 - p.kerr * r1 * s.x1 + p.epsilon * (s.y2 - s.y1),
      p.omega * s.y2 + g * s.x2 - p.k2 * r2 * s.x2 + p.kerr * r2 * s.y2 - p.epsilon * (s.x1 - s.x2),
      -p.omega * s.x2 + g * s.y2 - p.k2 * r2 * s.y2 - p.kerr * r2 * s.x2 + p.epsilon * (s.y1 - s.y2),
  };
}

std::pair<cplx, cplx> rhs_amplitude(cplx a1, cplx a2, const SystemParams& p) {
  const cplx i(0.0, 1.0);
  auto self = [&](cplx a) {
    return (-i * p.omega + 0.5 * p.k1 - (p.k2 + i * p.kerr) * std::norm(a)) * a;
  };
  return {self(a1) + p.epsilon * (std::conj(a1) - std::conj(a2)),
          self(a2) + p.epsilon * (std::conj(a2) - std::conj(a1))};
}

Mat4 jacobian(const ClassicalState& s, const SystemParams& p) {
  Mat4 j = Mat4::Zero();
  auto block = [&](int o, double x, double y) {
    const double r = x * x + y * y;
    const double g = 0.5 * p.k1;
    j(o, o) = g - p.k2 * (r + 2 * x * x) + 2 * p.kerr * x * y + p.epsilon;
    j(o, o + 1) = p.omega - 2 * p.k2 * x * y + p.kerr * (r + 2 * y * y);
    j(o + 1, o) = -p.omega - 2 * p.k2 * x * y - p.kerr * (r + 2 * x * x);
    j(o + 1, o + 1) = g - p.k2 * (r + 2 * y * y) - 2 * p.kerr * x * y - p.epsilon;
  };
  block(0, s.x1, s.y1);
  block(2, s.x2, s.y2);
  j(0, 2) = -p.epsilon;
  j(1, 3) = p.epsilon;
  j(2, 0) = -p.epsilon;
  j(3, 1) = p.epsilon;
  return j;
}

Mat4 trivial_jacobian(const SystemParams& p) { return jacobian(ClassicalState{}, p); }

std::array<cplx, 4> trivial_eigenvalues(const SystemParams& p) {
  const cplx root = std::sqrt(cplx(4.0 * p.epsilon * p.epsilon - p.omega * p.omega, 0.0));
  const cplx iw(0.0, p.omega);
  return {0.5 * (p.k1 + 2.0 * iw), 0.5 * (p.k1 - 2.0 * iw), 0.5 * (p.k1 + 2.0 * root), 0.5 * (p.k1 - 2.0 * root)};
}

std::array<cplx, 4> trivial_eigenvalues_numeric(const SystemParams& p) {
  Eigen::EigenSolver<Mat4> es(trivial_jacobian(p), false);
  std::array<cplx, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = es.eigenvalues()[k];
  return out;
}

double pitchfork_epsilon(const SystemParams& p) { return 0.25 * std::sqrt(p.k1 * p.k1 + 4.0 * p.omega * p.omega); }

std::optional<ClassicalState> polish_fixed_point(const ClassicalState& s, const SystemParams& p, double tol,
                                                 int max_iter) {
  return newton({}, p, s, tol, max_iter);
}

std::vector<ClassicalState> ihss_branch(const SystemParams& p) {
  p.validate();
  std::vector<ClassicalState> out;
  const double a = p.omega + p.k1 * p.kerr / (2.0 * p.k2);
  const double b = 2.0 * p.epsilon * p.kerr / p.k2;
  const double disc = 4.0 * p.epsilon * p.epsilon - a * a + b * b;
  if (disc < 0.0 || a + b == 0.0) return out;

  for (double sign : {1.0, -1.0}) {
    const double q = (-2.0 * p.epsilon + sign * std::sqrt(disc)) / (a + b);  // x* / y*
    // On the antisymmetric ray both equations are linear in R = r^2:
    //   w + (k1/2 + 2 eps) q + R (K - k2 q) = 0
    //   k1/2 - 2 eps - w q - R (k2 + K q) = 0
    const double a1 = p.omega + (0.5 * p.k1 + 2.0 * p.epsilon) * q, b1 = p.kerr - p.k2 * q;
    const double a2 = 0.5 * p.k1 - 2.0 * p.epsilon - p.omega * q, b2 = -(p.k2 + p.kerr * q);
    const double r_sq = -(a1 * b1 + a2 * b2) / (b1 * b1 + b2 * b2);
    if (!(r_sq > 0.0)) continue;
    const double y = std::sqrt(r_sq / (1.0 + q * q));
    for (double ys : {y, -y}) {
      auto polished = polish_fixed_point({q * ys, ys, -q * ys, -ys}, p, 1e-12);
      if (!polished) continue;
      const ClassicalState& s = *polished;
      if (rhs(s, p).norm() >= 1e-9 || s.norm() < 1e-6) continue;
      if (std::abs(s.x1 + s.x2) > 1e-9 || std::abs(s.y1 + s.y2) > 1e-9) continue;
      const bool dup = std::any_of(out.begin(), out.end(), [&](const ClassicalState& o) {
        return (o.vec() - s.vec()).norm() < 1e-7;
      });
      if (!dup) out.push_back(s);
    }
  }
  return out;
}

const char* to_string(AttractorKind k) noexcept {
  switch (k) {
    case AttractorKind::LimitCycle: return "limit-cycle";
    case AttractorKind::SteadyState: return "steady-state";
    case AttractorKind::Divergent: return "divergent";
  }
  return "unknown";
}

ClassicalState integrate(const SystemParams& p, const ClassicalState& initial, double t_final, double dt,
                         const VectorField& field) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw Error(ErrorCode::InvalidArgument, "integrate: need dt > 0, t_final >= 0");
  Vec4 v = initial.vec();
  const auto steps = static_cast<long>(std::llround(t_final / dt));
  for (long n = 0; n < steps; ++n) v = rk4_step(field, p, v, dt);
  return ClassicalState::from(v);
}

Attractor classify_attractor(const SystemParams& p, const ClassicalState& initial, const AttractorOptions& o,
                             const VectorField& field) {
  p.validate();
  if (!(o.dt > 0.0) || o.dt > 0.01 + 1e-15)
    throw Error(ErrorCode::StabilityBound, "classify_attractor: dt must lie in (0, 0.01/k1]");
  if (!(o.t_transient >= 0.0) || !(o.t_measure > 0.0))
    throw Error(ErrorCode::InvalidArgument, "classify_attractor: need t_transient >= 0 and t_measure > 0");
  if (!initial.finite()) throw Error(ErrorCode::InvalidArgument, "classify_attractor: initial state is not finite");

  const double dt = o.dt / p.k1;
  Attractor out;
  Vec4 v = initial.vec();
  auto diverged = [&](const Vec4& x) { return !x.allFinite() || x.norm() > o.divergence; };

  const long transient = std::llround(o.t_transient / o.dt);
  for (long n = 0; n < transient; ++n) {
    v = rk4_step(field, p, v, dt);
    if (diverged(v)) {
      out.kind = AttractorKind::Divergent;
      out.state = ClassicalState::from(v);
      return out;
    }
  }

  // measurement windows; extended while a settled point refuses to polish
  const long window = std::max<long>(1, std::llround(o.t_measure / o.dt));
  for (int attempt = 0; attempt < 4; ++attempt) {
    double lo = v[0], hi = v[0], sum_r = 0.0;
    for (long n = 0; n < window; ++n) {
      v = rk4_step(field, p, v, dt);
      if (diverged(v)) {
        out.kind = AttractorKind::Divergent;
        out.state = ClassicalState::from(v);
        return out;
      }
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
      sum_r += v[0] * v[0] + v[1] * v[1];
    }
    out.amplitude = hi - lo;
    out.mean_r1_sq = sum_r / window;
    out.state = ClassicalState::from(v);
    if (out.amplitude > o.lc_threshold) {
      out.kind = AttractorKind::LimitCycle;
      return out;
    }
    auto fixed = newton(field, p, out.state, 1e-12, 50);
    if (fixed && (fixed->vec() - v).norm() < 10.0 * o.lc_threshold) {
      out.kind = AttractorKind::SteadyState;
      out.state = *fixed;
      out.residual = field_vec(field, p, fixed->vec()).norm();
      return out;
    }
  }
  // never settled onto a polishable point: slow oscillation below the threshold
  out.kind = AttractorKind::LimitCycle;
  return out;
}

std::vector<ClassicalSweepPoint> classical_sweeps(const SystemParams& base, const std::vector<double>& values,
                                                  const ClassicalSweepOptions& o) {
  base.validate();
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "classical_sweeps: empty value list");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error(ErrorCode::InvalidArgument, "classical_sweeps: non-finite value");
    if (i > 0 && !(values[i] > values[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "classical_sweeps: values must be strictly ascending");
  }
  std::vector<ClassicalSweepPoint> table(values.size());
  ClassicalState start = o.initial;
  const bool forward = o.direction == SweepDirection::Forward;
  for (std::size_t step = 0; step < values.size(); ++step) {
    const std::size_t i = forward ? step : values.size() - 1 - step;
    ClassicalSweepPoint& pt = table[i];
    pt.value = values[i];
    try {
      const SystemParams p = o.parameter == SweepParameter::EpsilonOverK1 ? base.with_epsilon(values[i] * base.k1)
                                                                          : base.with_kerr(values[i]);
      pt.attractor = classify_attractor(p, start, o.attractor);
      if (o.continuation && pt.attractor->kind != AttractorKind::Divergent) start = pt.attractor->state;
    } catch (const std::exception& ex) {
      pt.error = ex.what();
    }
  }
  return table;
}

}  // namespace qlcod
