#include "nlseg/potential.hpp"

#include <cmath>
#include <string>

#include "nlseg/error.hpp"

namespace nlseg {

PowerPotential::PowerPotential(double p) : p_(p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("potential exponent must lie in (0, 1), got " + std::to_string(p));
  }
}

double PowerPotential::value(double t) const {
  if (!(t >= 0.0)) throw InvalidArgument("phi: argument must be >= 0");
  if (t == 0.0) return 0.0;
  return std::pow(t, p_);
}

double PowerPotential::derivative(double t) const {
  if (!(t > 0.0)) throw InvalidArgument("phi': argument must be > 0");
  return p_ * std::pow(t, p_ - 1.0);
}

} // namespace nlseg
