#include "nlseg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlseg/error.hpp"
#include "nlseg/fft.hpp"

namespace nlseg {

namespace {

inline std::size_t next(std::size_t k, std::size_t n) { return k + 1 == n ? 0 : k + 1; }
inline std::size_t prev(std::size_t k, std::size_t n) { return k == 0 ? n - 1 : k - 1; }

} // namespace

ImageGrid forward_x(const ImageGrid& u) {
  const std::size_t n = u.n();
  ImageGrid out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = u(i, next(j, n)) - u(i, j);
  return out;
}

ImageGrid forward_y(const ImageGrid& u) {
  const std::size_t n = u.n();
  ImageGrid out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = next(i, n);
    for (std::size_t j = 0; j < n; ++j) out(i, j) = u(ip, j) - u(i, j);
  }
  return out;
}

ImageGrid backward_x(const ImageGrid& u) {
  const std::size_t n = u.n();
  ImageGrid out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = u(i, j) - u(i, prev(j, n));
  return out;
}

ImageGrid backward_y(const ImageGrid& u) {
  const std::size_t n = u.n();
  ImageGrid out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = prev(i, n);
    for (std::size_t j = 0; j < n; ++j) out(i, j) = u(i, j) - u(im, j);
  }
  return out;
}

GradientField grad(const ImageGrid& u) {
  GradientField p;
  p.dx = forward_x(u);
  p.dy = forward_y(u);
  return p;
}

ImageGrid grad_adjoint(const GradientField& p) {
  require_same_shape(p.dx, p.dy, "grad_adjoint");
  const std::size_t n = p.n();
  ImageGrid out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = prev(i, n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jm = prev(j, n);
      out(i, j) = -(p.dx(i, j) - p.dx(i, jm)) - (p.dy(i, j) - p.dy(im, j));
    }
  }
  return out;
}

HessianField hessian(const ImageGrid& v) {
  const ImageGrid vx = forward_x(v);
  const ImageGrid vy = forward_y(v);
  HessianField h;
  h.xx = backward_x(vx);
  h.xy = forward_x(vy);
  h.yx = forward_y(vx);
  h.yy = backward_y(vy);
  return h;
}

ImageGrid hessian_adjoint(const HessianField& P) {
  require_same_shape(P.xx, P.xy, "hessian_adjoint");
  require_same_shape(P.xx, P.yx, "hessian_adjoint");
  require_same_shape(P.xx, P.yy, "hessian_adjoint");
  const ImageGrid a = forward_x(backward_x(P.xx));
  const ImageGrid b = backward_y(backward_x(P.xy));
  const ImageGrid c = backward_x(backward_y(P.yx));
  const ImageGrid d = forward_y(backward_y(P.yy));
  ImageGrid out(P.n());
  auto o = out.data();
  for (std::size_t k = 0; k < o.size(); ++k) {
    o[k] = a.data()[k] + b.data()[k] + c.data()[k] + d.data()[k];
  }
  return out;
}

ImageGrid grad_norms(const GradientField& p) {
  require_same_shape(p.dx, p.dy, "grad_norms");
  ImageGrid out(p.n());
  auto o = out.data();
  for (std::size_t k = 0; k < o.size(); ++k) {
    const double a = p.dx.data()[k];
    const double b = p.dy.data()[k];
    o[k] = std::sqrt(a * a + b * b);
  }
  return out;
}

OperatorSymbols compute_symbols(std::size_t n) {
  if (n < 2) throw InvalidArgument("compute_symbols: n must be >= 2, got " + std::to_string(n));
  std::vector<double> s1(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    s1[k] = 4.0 * s * s;
  }
  OperatorSymbols sym{n, ImageGrid(n), ImageGrid(n)};
  double max_entry = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double d = s1[a] + s1[b];
      sym.sigma_d(a, b) = d;
      sym.sigma_h(a, b) = d * d;
      max_entry = std::max(max_entry, d * d);
    }
  }
  for (auto* g : {&sym.sigma_d, &sym.sigma_h}) {
    for (double& x : g->data()) {
      if (x < 0.0) {
        if (-x > 1e-12 * max_entry) throw NumericalError("negative Fourier symbol entry");
        x = 0.0;
      }
    }
  }
#ifdef NLSEG_CHECK_SYMBOLS
  if (const double dev = symbol_deviation(sym); !(dev <= 1e-10)) {
    throw NumericalError("Fourier symbols deviate from impulse-response DFT by " +
                         std::to_string(dev));
  }
#endif
  return sym;
}

double symbol_deviation(const OperatorSymbols& symbols) {
  const std::size_t n = symbols.n;
  ImageGrid impulse(n);
  impulse(0, 0) = 1.0;
  const ImageGrid dtd = grad_adjoint(grad(impulse));
  const ImageGrid hth = hessian_adjoint(hessian(impulse));

  double dev = 0.0;
  Fft2d fft(n);
  for (const auto& [kernel, symbol] :
       {std::pair{&dtd, &symbols.sigma_d}, std::pair{&hth, &symbols.sigma_h}}) {
    fft.load(*kernel);
    fft.forward();
    const auto spec = fft.buffer();
    const auto expected = symbol->data();
    for (std::size_t k = 0; k < spec.size(); ++k) {
      dev = std::max(dev, std::abs(spec[k] - std::complex<double>(expected[k], 0.0)));
    }
  }
  return dev;
}

} // namespace nlseg
