#pragma once

#include <cstddef>

#include "nlseg/image.hpp"

namespace nlseg {

// Periodic finite differences on n x n grids. Axis x runs along columns (j),
// axis y along rows (i):
//   (D+x u)(i,j) = u(i,j+1) - u(i,j)     (D-x u)(i,j) = u(i,j) - u(i,j-1)
//   (D+y u)(i,j) = u(i+1,j) - u(i,j)     (D-y u)(i,j) = u(i,j) - u(i-1,j)
// with all indices taken mod n.

ImageGrid forward_x(const ImageGrid& u);
ImageGrid forward_y(const ImageGrid& u);
ImageGrid backward_x(const ImageGrid& u);
ImageGrid backward_y(const ImageGrid& u);

/// D u = (D+x u, D+y u).
GradientField grad(const ImageGrid& u);

/// D^T p = -D-x p.dx - D-y p.dy.
ImageGrid grad_adjoint(const GradientField& p);

/// H v = (D-x D+x v, D+x D+y v, D+y D+x v, D-y D+y v).
HessianField hessian(const ImageGrid& v);

/// H^T P = D+x D-x P.xx + D-y D-x P.xy + D-x D-y P.yx + D+y D-y P.yy.
ImageGrid hessian_adjoint(const HessianField& P);

/// Per-pixel Euclidean norm sqrt(dx^2 + dy^2).
ImageGrid grad_norms(const GradientField& p);

/// Fourier symbols of D^T D and H^T H under the unnormalized forward DFT.
struct OperatorSymbols {
  std::size_t n = 0;
  ImageGrid sigma_d; ///< 4 sin^2(pi k1/n) + 4 sin^2(pi k2/n)
  ImageGrid sigma_h; ///< sigma_d^2
};

/// Closed-form symbols; entries are clamped to be nonnegative. When the
/// library is built with NLSEG_CHECK_SYMBOLS the result is cross-checked
/// against the FFT of the operators' impulse responses.
OperatorSymbols compute_symbols(std::size_t n);

/// Max abs deviation between the closed-form symbols and the DFT of the
/// impulse responses of D^T D and H^T H.
double symbol_deviation(const OperatorSymbols& symbols);

} // namespace nlseg
