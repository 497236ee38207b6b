#include "necrosim/interfaces.hpp"

#include <sstream>

#include "necrosim/errors.hpp"

namespace necrosim {

double default_amplitude_bound(const GeometryParams& geom) { return 0.9 * geom.max_amplitude_bound(); }

InterfacePair InterfacePair::zero(int max_mode) { return {FourierSeries(max_mode), FourierSeries(max_mode), {}}; }

int InterfacePair::max_mode() const {
  if (rho1.max_mode() != rho2.max_mode()) throw ContractError("rho1 and rho2 have different truncations");
  return rho1.max_mode();
}

double InterfacePair::bound(const GeometryParams& geom) const {
  const double a = amplitude_bound.value_or(default_amplitude_bound(geom));
  if (!(a > 0) || !(a < geom.max_amplitude_bound())) {
    std::ostringstream os;
    os << "amplitude bound " << a << " must lie in (0, (R1-R2)/(R1+R2) = " << geom.max_amplitude_bound() << ")";
    throw ConfigError(os.str());
  }
  return a;
}

void InterfacePair::check_admissible(const GeometryParams& geom) const {
  const double a = bound(geom);
  for (int i = 0; i < 2; ++i) {
    const double s = (*this)[i].sup_norm();
    if (!(s < a)) {
      std::ostringstream os;
      os << "interface " << i + 1 << " reached the admissibility bound: ||rho||_inf = " << s << " >= a = " << a;
      throw InterfaceCollision(os.str(), i + 1, s, a);
    }
  }
}

InterfacePair InterfacePair::rotated(double phi) const { return {rho1.rotated(phi), rho2.rotated(phi), amplitude_bound}; }

InterfacePair InterfacePair::reflected() const { return {rho1.reflected(), rho2.reflected(), amplitude_bound}; }

}  // namespace necrosim
