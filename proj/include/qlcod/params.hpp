#pragma once

#include <string>

namespace qlcod {

enum class Regime { Weak, Deep, Balanced };

/// Model constants shared by the quantum, classical and noisy-classical models.
struct SystemParams {
  double omega = 2.0;    // eigenfrequency
  double k1 = 1.0;       // linear pumping (one-phonon gain)
  double k2 = 0.2;       // nonlinear damping (two-phonon loss)
  double kerr = 1.0;     // Kerr / non-isochronicity K
  double epsilon = 0.0;  // attractive-repulsive coupling strength

  /// Throws Error(InvalidArgument) unless k1 > 0, k2 > 0, epsilon >= 0 and all finite.
  void validate() const;

  Regime regime() const noexcept;

  SystemParams with_epsilon(double eps) const {
    SystemParams p = *this;
    p.epsilon = eps;
    return p;
  }
  SystemParams with_kerr(double k) const {
    SystemParams p = *this;
    p.kerr = k;
    return p;
  }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

const char* to_string(Regime r) noexcept;
std::string describe(const SystemParams& p);

}  // namespace qlcod
