#include "nlseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nlseg/error.hpp"

namespace nlseg {

void PhantomSpec::validate() const {
  if (n < 2) throw InvalidArgument("phantom side length must be >= 2");
  if (K < 1) throw InvalidArgument("phantom needs at least one phase");
  if (phase_values.size() != static_cast<std::size_t>(K)) {
    throw InvalidArgument("phase_values must have K entries");
  }
  for (std::size_t i = 0; i < phase_values.size(); ++i) {
    if (!(phase_values[i] > 0.0 && phase_values[i] <= 1.0)) {
      throw InvalidArgument("phase values must lie in (0, 1]");
    }
    if (i > 0 && !(phase_values[i] > phase_values[i - 1])) {
      throw InvalidArgument("phase values must be strictly ascending");
    }
  }
  for (const auto& s : shapes) {
    const int phase = std::visit([](const auto& sh) { return sh.phase; }, s);
    if (phase < 1 || phase > K) {
      throw InvalidArgument("shape phase index " + std::to_string(phase) + " outside [1, " +
                            std::to_string(K) + "]");
    }
  }
  if (!(bias_amplitude >= 0.0)) throw InvalidArgument("bias_amplitude must be >= 0");
  if (composition == Composition::multiplicative && bias_kind != BiasKind::none &&
      !(bias_amplitude < 1.0)) {
    throw InvalidArgument("multiplicative bias amplitude must be < 1 to keep the field positive");
  }
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise_sigma must be >= 0");
}

ImageGrid bias_shape(std::size_t n, BiasKind kind) {
  ImageGrid s(n);
  if (kind == BiasKind::none) return s;
  const double nd = static_cast<double>(n);
  const double c = 0.5 * (nd - 1.0);
  const double width = nd / 4.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double y = static_cast<double>(i);
      const double x = static_cast<double>(j);
      double val = 0.0;
      switch (kind) {
      case BiasKind::linear_ramp:
        val = 2.0 * x / (nd - 1.0) - 1.0;
        break;
      case BiasKind::gaussian_bump:
        val = std::exp(-((y - c) * (y - c) + (x - c) * (x - c)) / (2.0 * width * width));
        break;
      case BiasKind::low_freq_sinusoid:
        val = std::sin(2.0 * std::numbers::pi * x / nd) * std::cos(2.0 * std::numbers::pi * y / nd);
        break;
      case BiasKind::none:
        break;
      }
      s(i, j) = val;
    }
  }
  double peak = 0.0;
  for (double v : s.data()) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : s.data()) v /= peak;
  }
  return s;
}

namespace {

LabelMap rasterize(const PhantomSpec& spec) {
  const std::size_t n = spec.n;
  LabelMap labels(n, 1);
  for (const auto& shape : spec.shapes) {
    if (const auto* d = std::get_if<Disk>(&shape)) {
      const double r2 = d->radius * d->radius;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double dy = static_cast<double>(i) - d->center_row;
          const double dx = static_cast<double>(j) - d->center_col;
          if (dy * dy + dx * dx <= r2) labels(i, j) = d->phase;
        }
      }
    } else {
      const auto& r = std::get<Rect>(shape);
      for (std::size_t i = r.row0; i < std::min(r.row1, n); ++i)
        for (std::size_t j = r.col0; j < std::min(r.col1, n); ++j) labels(i, j) = r.phase;
    }
  }
  return labels;
}

class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    constexpr double kScale = 0x1.0p-53;
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * kScale; // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * kScale;       // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace

Phantom generate(const PhantomSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  Phantom ph{ImageGrid(n), rasterize(spec), ImageGrid(n), ImageGrid(n)};

  for (std::size_t k = 0; k < n * n; ++k) {
    ph.clean_u.data()[k] = spec.phase_values[static_cast<std::size_t>(ph.truth.data()[k] - 1)];
  }

  const ImageGrid shape = bias_shape(n, spec.bias_kind);
  const bool mult = spec.composition == Composition::multiplicative;
  for (std::size_t k = 0; k < n * n; ++k) {
    const double dev = spec.bias_amplitude * shape.data()[k];
    ph.bias_v.data()[k] = mult ? 1.0 + dev : dev;
  }

  GaussianStream noise(spec.seed);
  for (std::size_t k = 0; k < n * n; ++k) {
    const double u = ph.clean_u.data()[k];
    const double v = ph.bias_v.data()[k];
    double f = mult ? u * v : u + v;
    if (spec.noise_sigma > 0.0) f += spec.noise_sigma * noise.next();
    if (mult) f = std::max(f, kPositiveFloor);
    ph.f.data()[k] = f;
  }
  return ph;
}

namespace {

// Values tuned on the presets at n = 128; multiplicative phantoms are
// decomposed in the log domain.
RecommendedSettings recommended_for(Composition composition, double alpha_log,
                                    double alpha_linear) {
  RecommendedSettings rec;
  const bool log_domain = composition == Composition::multiplicative;
  rec.alpha = log_domain ? alpha_log : alpha_linear;
  rec.beta = 1000.0;
  rec.log_domain = log_domain;
  return rec;
}

} // namespace

PhantomSpec two_phase_preset(std::size_t n, double noise_sigma, double bias_amplitude,
                             Composition composition, std::uint64_t seed) {
  const double nd = static_cast<double>(n);
  PhantomSpec spec;
  spec.n = n;
  spec.K = 2;
  spec.phase_values = {0.3, 0.8};
  spec.shapes = {
      Disk{0.40 * nd, 0.38 * nd, 0.22 * nd, 2},
      Rect{n * 5 / 8, n * 5 / 8, n * 7 / 8, n * 7 / 8, 2},
  };
  spec.bias_amplitude = bias_amplitude;
  spec.bias_kind = bias_amplitude > 0.0 ? BiasKind::low_freq_sinusoid : BiasKind::none;
  spec.noise_sigma = noise_sigma;
  spec.composition = composition;
  spec.seed = seed;
  spec.recommended = recommended_for(composition, 0.3, 0.1);
  return spec;
}

PhantomSpec five_phase_preset(std::size_t n, double noise_sigma, double bias_amplitude,
                              Composition composition, std::uint64_t seed) {
  const double nd = static_cast<double>(n);
  PhantomSpec spec;
  spec.n = n;
  spec.K = 5;
  spec.phase_values = {0.15, 0.3, 0.45, 0.6, 0.75};
  spec.shapes = {
      Disk{0.32 * nd, 0.32 * nd, 0.22 * nd, 2},
      Disk{0.32 * nd, 0.32 * nd, 0.11 * nd, 4},
      Rect{n * 9 / 16, n / 8, n * 7 / 8, n * 7 / 16, 3},
      Rect{n / 8, n * 5 / 8, n * 7 / 16, n * 7 / 8, 5},
      Disk{0.72 * nd, 0.72 * nd, 0.15 * nd, 4},
      Disk{0.72 * nd, 0.72 * nd, 0.07 * nd, 5},
  };
  spec.bias_amplitude = bias_amplitude;
  spec.bias_kind = bias_amplitude > 0.0 ? BiasKind::low_freq_sinusoid : BiasKind::none;
  spec.noise_sigma = noise_sigma;
  spec.composition = composition;
  spec.seed = seed;
  spec.recommended = recommended_for(composition, 0.08, 0.05);
  return spec;
}

std::string to_string(BiasKind kind) {
  switch (kind) {
  case BiasKind::none: return "none";
  case BiasKind::linear_ramp: return "linear_ramp";
  case BiasKind::gaussian_bump: return "gaussian_bump";
  case BiasKind::low_freq_sinusoid: return "low_freq_sinusoid";
  }
  return "none";
}

std::string to_string(Composition c) {
  return c == Composition::additive ? "additive" : "multiplicative";
}

BiasKind parse_bias_kind(const std::string& s) {
  if (s == "none") return BiasKind::none;
  if (s == "linear_ramp") return BiasKind::linear_ramp;
  if (s == "gaussian_bump") return BiasKind::gaussian_bump;
  if (s == "low_freq_sinusoid") return BiasKind::low_freq_sinusoid;
  throw ParseError("unknown bias_kind '" + s + "'");
}

Composition parse_composition(const std::string& s) {
  if (s == "additive") return Composition::additive;
  if (s == "multiplicative") return Composition::multiplicative;
  throw ParseError("unknown composition '" + s + "'");
}

} // namespace nlseg
