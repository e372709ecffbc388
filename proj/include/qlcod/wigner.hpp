#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlcod/liouvillian.hpp"

namespace qlcod {

/// Rectangular phase-space grid; alpha = x + i y.
struct PhaseGrid {
  double x_min = -5.0;
  double x_max = 5.0;
  double y_min = -5.0;
  double y_max = 5.0;
  int n_x = 201;
  int n_y = 201;

  void validate() const;  // monotone bounds, n_x, n_y >= 16

  double dx() const { return (x_max - x_min) / (n_x - 1); }
  double dy() const { return (y_max - y_min) / (n_y - 1); }
  double x(int j) const { return x_min + j * dx(); }
  double y(int i) const { return y_min + i * dy(); }

  static PhaseGrid weak_default() { return {-5.0, 5.0, -5.0, 5.0, 201, 201}; }
  static PhaseGrid deep_default() { return {-3.0, 3.0, -3.0, 3.0, 151, 151}; }
  static PhaseGrid for_regime(Regime r) { return r == Regime::Deep ? deep_default() : weak_default(); }

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

struct WignerField {
  PhaseGrid grid;
  Eigen::MatrixXd values;         // values(i, j) = W(x_j, y_i), n_y x n_x
  bool boundary_warning = false;  // edge |W| above 1e-4 * max W

  double normalization() const;   // sum W dx dy
  double max() const { return values.maxCoeff(); }
};

/// W(x, y) = (2/pi) sum_k (-1)^k <k| D^dagger(alpha) rho D(alpha) |k>, evaluated
/// through the Fock-basis Laguerre expansion. Normalized so the integral over
/// dx dy is 1 and the vacuum peaks at 2/pi.
WignerField wigner(const DensityMatrix& rho_single_site, const PhaseGrid& grid);

/// Single-point evaluation of the same expansion.
double wigner_at(const linalg::DenseMatrix& rho_single_site, double x, double y);

enum class LobeClass { OscillatoryRing, BimodalQod, Unimodal };

const char* to_string(LobeClass c) noexcept;

struct LocalMaximum {
  double x;
  double y;
  double w;
};

struct LobeReport {
  LobeClass classification = LobeClass::Unimodal;
  double delta_y = 0.0;             // |y+ - y-| of the lobe pair, 0 unless bimodal
  double euclidean_distance = 0.0;  // distance between the lobe maxima, 0 unless bimodal
  double ring_contrast = 0.0;       // min / max of W on the circle through the peak
  std::vector<LocalMaximum> maxima;
};

struct LobeOptions {
  double maxima_fraction = 0.5;  // local maxima below this fraction of max W are ignored
  /// A field that keeps at least this fraction of its peak value all the way
  /// round the circle through the peak is an unbroken ring (-3 dB criterion).
  double ring_contrast_threshold = 0.70710678118654752;
  int angular_samples = 720;
};

LobeReport lobe_report(const WignerField& field, const LobeOptions& options = {});

struct LobeSweepPoint {
  double eps_over_k1;
  std::optional<LobeReport> report;
  double mean_phonon = 0.0;
  std::string error;  // empty on success
};

struct LobeSweep {
  std::vector<LobeSweepPoint> points;
  std::optional<double> transition;  // first eps/k1 classified bimodal
};

/// Steady state -> site-1 reduced state -> Wigner field -> lobe report for
/// every eps/k1 in `eps_over_k1` (ascending). Failed points are recorded and
/// the sweep continues.
LobeSweep lobe_sweep(const SystemParams& base, const std::vector<double>& eps_over_k1, const FockSpace& space,
                     const PhaseGrid& grid, unsigned threads = 1, const LobeOptions& options = {});

}  // namespace qlcod
