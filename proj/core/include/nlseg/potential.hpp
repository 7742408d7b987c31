#pragma once

#include <concepts>

namespace nlseg {

/// Contract for a non-Lipschitz potential: phi(0) = 0, continuous, concave,
/// coercive, C^1 on (0, inf) with phi' > 0 and phi'(0+) = +inf.
template <typename P>
concept Potential = requires(const P& p, double t) {
  { p.value(t) } -> std::convertible_to<double>;
  { p.derivative(t) } -> std::convertible_to<double>;
};

/// phi(t) = t^p with 0 < p < 1.
class PowerPotential {
public:
  static constexpr double kDefaultExponent = 0.5;

  explicit PowerPotential(double p = kDefaultExponent);

  [[nodiscard]] double exponent() const noexcept { return p_; }

  /// t^p; throws for t < 0.
  [[nodiscard]] double value(double t) const;
  /// p t^(p-1); throws for t <= 0, where the derivative is unbounded.
  [[nodiscard]] double derivative(double t) const;

private:
  double p_;
};

static_assert(Potential<PowerPotential>);

using PotentialSpec = PowerPotential;

inline double phi(const PotentialSpec& spec, double t) { return spec.value(t); }
inline double phi_prime(const PotentialSpec& spec, double t) { return spec.derivative(t); }

} // namespace nlseg
