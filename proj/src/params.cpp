#include "qlcod/params.hpp"

#include <cmath>
#include <sstream>

#include "qlcod/error.hpp"

namespace qlcod {

void SystemParams::validate() const {
  const auto bad = [](const char* name, const char* why) {
    throw Error(ErrorCode::InvalidArgument, std::string("SystemParams: ") + name + " " + why);
  };
  if (!std::isfinite(omega)) bad("omega", "must be finite");
  if (!std::isfinite(kerr)) bad("kerr", "must be finite");
  if (!(k1 > 0.0) || !std::isfinite(k1)) bad("k1", "must be > 0");
  if (!(k2 > 0.0) || !std::isfinite(k2)) bad("k2", "must be > 0");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) bad("epsilon", "must be >= 0");
}

Regime SystemParams::regime() const noexcept {
  if (k1 > k2) return Regime::Weak;
  if (k2 > k1) return Regime::Deep;
  return Regime::Balanced;
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Weak: return "weak";
    case Regime::Deep: return "deep";
    case Regime::Balanced: return "balanced";
  }
  return "?";
}

std::string describe(const SystemParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "omega=" << p.omega << " k1=" << p.k1 << " k2=" << p.k2 << " kerr=" << p.kerr
     << " epsilon=" << p.epsilon;
  return os.str();
}

}  // namespace qlcod
