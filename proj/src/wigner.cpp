#include "qlcod/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "parallel.hpp"
#include "qlcod/error.hpp"
#include "qlcod/observables.hpp"

namespace qlcod {

using linalg::Complex;
using linalg::DenseMatrix;

void PhaseGrid::validate() const {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) && std::isfinite(y_max)))
    throw Error(ErrorCode::InvalidArgument, "phase grid bounds must be finite");
  if (!(x_min < x_max) || !(y_min < y_max))
    throw Error(ErrorCode::InvalidArgument, "phase grid bounds must satisfy min < max");
  if (n_x < 16 || n_y < 16) throw Error(ErrorCode::InvalidArgument, "phase grid needs at least 16 points per axis");
}

double WignerField::normalization() const { return values.sum() * grid.dx() * grid.dy(); }

namespace {

// Coefficients c_{m,k} = (-1)^m sqrt(m!/(m+k)!) rho(m, m+k), stored per diagonal.
struct Expansion {
  int n = 0;
  std::vector<std::vector<Complex>> diag;  // diag[k][m]
};

Expansion prepare(const DenseMatrix& rho) {
  Expansion e;
  e.n = static_cast<int>(rho.rows());
  e.diag.resize(e.n);
  for (int k = 0; k < e.n; ++k) {
    e.diag[k].resize(e.n - k);
    for (int m = 0; m + k < e.n; ++m) {
      double log_ratio = std::lgamma(m + 1.0) - std::lgamma(m + k + 1.0);
      double sign = (m % 2 == 0) ? 1.0 : -1.0;
      e.diag[k][m] = sign * std::exp(0.5 * log_ratio) * rho(m, m + k);
    }
  }
  return e;
}

double evaluate(const Expansion& e, double x, double y) {
  const double s = x * x + y * y;
  const double arg = 4.0 * s;
  const Complex two_alpha(2.0 * x, 2.0 * y);
  Complex power(1.0, 0.0);  // (2 alpha)^k
  double total = 0.0;
  for (int k = 0; k < e.n; ++k) {
    // generalized Laguerre L_m^k(arg) by upward recurrence
    double l_prev = 1.0;
    double l_curr = 1.0 + k - arg;
    Complex acc = e.diag[k][0];
    for (int m = 1; m + k < e.n; ++m) {
      double lm = (m == 1) ? l_curr : 0.0;
      if (m > 1) {
        lm = ((2.0 * (m - 1) + 1.0 + k - arg) * l_curr - (m - 1 + k) * l_prev) / m;
        l_prev = l_curr;
        l_curr = lm;
      }
      acc += e.diag[k][m] * lm;
    }
    double term = (acc * power).real();
    total += (k == 0) ? term : 2.0 * term;
    power *= two_alpha;
  }
  return 2.0 / std::numbers::pi * std::exp(-2.0 * s) * total;
}

}  // namespace

double wigner_at(const DenseMatrix& rho, double x, double y) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, "wigner: density matrix must be square");
  return evaluate(prepare(rho), x, y);
}

WignerField wigner(const DensityMatrix& rho, const PhaseGrid& grid) {
  grid.validate();
  if (rho.space().n_sites() != 1)
    throw Error(ErrorCode::InvalidArgument, "wigner: expects a single-site density matrix; use partial_trace first");
  const Expansion e = prepare(rho.matrix());
  WignerField f;
  f.grid = grid;
  f.values.resize(grid.n_y, grid.n_x);
  for (int i = 0; i < grid.n_y; ++i)
    for (int j = 0; j < grid.n_x; ++j) f.values(i, j) = evaluate(e, grid.x(j), grid.y(i));

  double edge = 0.0;
  for (int j = 0; j < grid.n_x; ++j)
    edge = std::max({edge, std::abs(f.values(0, j)), std::abs(f.values(grid.n_y - 1, j))});
  for (int i = 0; i < grid.n_y; ++i)
    edge = std::max({edge, std::abs(f.values(i, 0)), std::abs(f.values(i, grid.n_x - 1))});
  f.boundary_warning = edge > 1e-4 * std::abs(f.max());
  return f;
}

const char* to_string(LobeClass c) noexcept {
  switch (c) {
    case LobeClass::OscillatoryRing: return "oscillatory-ring";
    case LobeClass::BimodalQod: return "bimodal-QOD";
    case LobeClass::Unimodal: return "unimodal";
  }
  return "unknown";
}

namespace {

double bilinear(const WignerField& f, double x, double y) {
  const PhaseGrid& g = f.grid;
  double u = (x - g.x_min) / g.dx();
  double v = (y - g.y_min) / g.dy();
  int j = std::clamp(static_cast<int>(std::floor(u)), 0, g.n_x - 2);
  int i = std::clamp(static_cast<int>(std::floor(v)), 0, g.n_y - 2);
  double tu = std::clamp(u - j, 0.0, 1.0);
  double tv = std::clamp(v - i, 0.0, 1.0);
  const auto& w = f.values;
  return (1 - tv) * ((1 - tu) * w(i, j) + tu * w(i, j + 1)) + tv * ((1 - tu) * w(i + 1, j) + tu * w(i + 1, j + 1));
}

// Sub-cell vertex of the parabola through three equally spaced samples.
double parabolic_offset(double lo, double mid, double hi) {
  double denom = lo - 2.0 * mid + hi;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (lo - hi) / denom, -0.5, 0.5);
}

std::vector<LocalMaximum> local_maxima(const WignerField& f, double floor_value) {
  const auto& w = f.values;
  const PhaseGrid& g = f.grid;
  std::vector<LocalMaximum> out;
  for (int i = 1; i + 1 < g.n_y; ++i) {
    for (int j = 1; j + 1 < g.n_x; ++j) {
      const double v = w(i, j);
      if (v < floor_value) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di)
        for (int dj = -1; dj <= 1 && is_max; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double u = w(i + di, j + dj);
          // strict against earlier cells in raster order so a plateau yields one maximum
          bool earlier = di < 0 || (di == 0 && dj < 0);
          if (earlier ? u >= v : u > v) is_max = false;
        }
      if (!is_max) continue;
      double ox = parabolic_offset(w(i, j - 1), v, w(i, j + 1));
      double oy = parabolic_offset(w(i - 1, j), v, w(i + 1, j));
      out.push_back({g.x(j) + ox * g.dx(), g.y(i) + oy * g.dy(), v});
    }
  }
  std::sort(out.begin(), out.end(), [](const LocalMaximum& a, const LocalMaximum& b) { return a.w > b.w; });
  return out;
}

}  // namespace

LobeReport lobe_report(const WignerField& f, const LobeOptions& options) {
  f.grid.validate();
  if (f.values.rows() != f.grid.n_y || f.values.cols() != f.grid.n_x)
    throw Error(ErrorCode::InvalidArgument, "lobe_report: field shape does not match its grid");
  const PhaseGrid& g = f.grid;
  LobeReport r;
  const double wmax = f.values.maxCoeff();
  const double wmin = f.values.minCoeff();
  if (!(wmax > 0.0) || wmax - wmin <= 1e-12 * std::max(1.0, std::abs(wmax))) return r;

  r.maxima = local_maxima(f, options.maxima_fraction * wmax);

  // ring centre: origin when on the grid, otherwise the grid centre
  double cx = (g.x_min <= 0.0 && 0.0 <= g.x_max) ? 0.0 : 0.5 * (g.x_min + g.x_max);
  double cy = (g.y_min <= 0.0 && 0.0 <= g.y_max) ? 0.0 : 0.5 * (g.y_min + g.y_max);
  const double cell = std::max(g.dx(), g.dy());
  const double r_max = std::min({cx - g.x_min, g.x_max - cx, cy - g.y_min, g.y_max - cy});

  // a peak at the centre is a single blob, not a ring
  const LocalMaximum top = r.maxima.empty() ? LocalMaximum{cx, cy, wmax} : r.maxima.front();
  const bool centred = std::hypot(top.x - cx, top.y - cy) <= 1.5 * cell;

  const double r_peak = std::hypot(top.x - cx, top.y - cy);
  if (!centred && r_peak < r_max) {
    // contrast along the circle through the global maximum
    double ridge_min = std::numeric_limits<double>::infinity();
    double ridge_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < options.angular_samples; ++k) {
      const double th = 2.0 * std::numbers::pi * k / options.angular_samples;
      const double v = bilinear(f, cx + r_peak * std::cos(th), cy + r_peak * std::sin(th));
      ridge_min = std::min(ridge_min, v);
      ridge_max = std::max(ridge_max, v);
    }
    r.ring_contrast = ridge_max > 0.0 ? std::max(0.0, ridge_min) / ridge_max : 0.0;
    if (r.ring_contrast >= options.ring_contrast_threshold) {
      r.classification = LobeClass::OscillatoryRing;
      return r;
    }
  }

  // lobe pair: two retained maxima related by inversion or by y-reflection
  const double tol = 2.0 * cell;
  for (std::size_t a = 0; a < r.maxima.size(); ++a) {
    for (std::size_t b = a + 1; b < r.maxima.size(); ++b) {
      const auto& p = r.maxima[a];
      const auto& q = r.maxima[b];
      const bool inversion = std::abs(p.x + q.x - 2 * cx) <= tol && std::abs(p.y + q.y - 2 * cy) <= tol;
      const bool reflection = std::abs(p.x - q.x) <= tol && std::abs(p.y + q.y - 2 * cy) <= tol;
      if (!(inversion || reflection)) continue;
      if (std::hypot(p.x - q.x, p.y - q.y) <= tol) continue;
      r.classification = LobeClass::BimodalQod;
      r.delta_y = std::abs(p.y - q.y);
      r.euclidean_distance = std::hypot(p.x - q.x, p.y - q.y);
      r.maxima = {p, q};
      return r;
    }
  }
  if (!r.maxima.empty()) r.maxima.resize(1);
  return r;
}

LobeSweep lobe_sweep(const SystemParams& base, const std::vector<double>& eps_over_k1, const FockSpace& space,
                     const PhaseGrid& grid, unsigned threads, const LobeOptions& options) {
  base.validate();
  grid.validate();
  if (space.n_sites() != 2) throw Error(ErrorCode::InvalidArgument, "lobe_sweep: needs the two-site space");
  for (std::size_t i = 1; i < eps_over_k1.size(); ++i)
    if (!(eps_over_k1[i] > eps_over_k1[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "lobe_sweep: eps/k1 values must be strictly ascending");

  LobeSweep sweep;
  sweep.points.resize(eps_over_k1.size());
  detail::parallel_for(eps_over_k1.size(), threads, [&](std::size_t i) {
    LobeSweepPoint& pt = sweep.points[i];
    pt.eps_over_k1 = eps_over_k1[i];
    try {
      const SystemParams p = base.with_epsilon(eps_over_k1[i] * base.k1);
      const SteadyState ss = steady_state(build_liouvillian(p, space));
      pt.mean_phonon = mean_phonon(ss.rho, 1);
      pt.report = lobe_report(wigner(partial_trace(ss.rho, 1), grid), options);
    } catch (const std::exception& ex) {
      pt.error = ex.what();
    }
  });
  for (const auto& pt : sweep.points)
    if (pt.report && pt.report->classification == LobeClass::BimodalQod) {
      sweep.transition = pt.eps_over_k1;
      break;
    }
  return sweep;
}

}  // namespace qlcod
