#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlseg/image.hpp"

namespace nlseg {

/// Filled disk; pixel (i, j) is inside when (i-cy)^2 + (j-cx)^2 <= radius^2.
struct Disk {
  double center_row = 0.0;
  double center_col = 0.0;
  double radius = 0.0;
  int phase = 1;
};

/// Axis-aligned rectangle covering rows [row0, row1) and columns [col0, col1).
struct Rect {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t row1 = 0;
  std::size_t col1 = 0;
  int phase = 1;
};

using Shape = std::variant<Disk, Rect>;

enum class BiasKind { none, linear_ramp, gaussian_bump, low_freq_sinusoid };
enum class Composition { additive, multiplicative };

/// Model settings bundled with a phantom so it can be decomposed with
/// known-good values.
struct RecommendedSettings {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<bool> log_domain;

  bool operator==(const RecommendedSettings&) const = default;
};

/// Ground-truthed piecewise-constant phantom. Shapes are painted in order
/// over a background of phase 1; later shapes win where they overlap.
struct PhantomSpec {
  std::size_t n = 64;
  int K = 2;
  std::vector<double> phase_values{0.3, 0.8};
  std::vector<Shape> shapes;
  double bias_amplitude = 0.0;
  BiasKind bias_kind = BiasKind::none;
  double noise_sigma = 0.0;
  Composition composition = Composition::additive;
  std::uint64_t seed = 0;
  RecommendedSettings recommended;

  void validate() const;
};

struct Phantom {
  ImageGrid f;
  LabelMap truth;
  ImageGrid clean_u;
  ImageGrid bias_v;
};

/// Lower clamp applied to f in multiplicative mode.
inline constexpr double kPositiveFloor = 1e-4;

/// Deterministic: equal specs (including seed) give bit-identical output.
/// Noise is i.i.d. N(0, sigma^2) drawn with std::mt19937_64 (fully specified
/// by the C++ standard) and the Box-Muller transform: two 53-bit uniforms
/// u1 = (a + 1) 2^-53, u2 = b 2^-53 give sqrt(-2 ln u1) cos(2 pi u2) and
/// sqrt(-2 ln u1) sin(2 pi u2), consumed in row-major pixel order.
Phantom generate(const PhantomSpec& spec);

/// Unit-amplitude bias shape (max |s| = 1) for the given kind.
ImageGrid bias_shape(std::size_t n, BiasKind kind);

/// Two-phase preset: background plus a disk and a rectangle of phase 2.
/// Presets carry tuned recommended settings for their composition.
PhantomSpec two_phase_preset(std::size_t n, double noise_sigma, double bias_amplitude,
                             Composition composition, std::uint64_t seed);

/// Five-phase preset with nested and separate shapes of phases 2..5.
PhantomSpec five_phase_preset(std::size_t n, double noise_sigma, double bias_amplitude,
                              Composition composition, std::uint64_t seed);

std::string to_string(BiasKind kind);
std::string to_string(Composition c);
BiasKind parse_bias_kind(const std::string& s);
Composition parse_composition(const std::string& s);

} // namespace nlseg
