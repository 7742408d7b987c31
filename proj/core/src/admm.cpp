#include "nlseg/admm.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "nlseg/error.hpp"

namespace nlseg {

void AdmmParams::validate() const {
  if (!(r > 0.0)) throw InvalidArgument("ADMM penalty r must be > 0");
  if (!(tol_in > 0.0)) throw InvalidArgument("tol_in must be > 0");
  if (maxit_in < 1) throw InvalidArgument("maxit_in must be >= 1");
}

Vec2 shrink_group(Vec2 z, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("shrink_group: threshold must be >= 0");
  const double nz = std::hypot(z[0], z[1]);
  if (nz == 0.0) return {0.0, 0.0};
  const double scale = std::max(1.0 - threshold / nz, 0.0);
  return {scale * z[0], scale * z[1]};
}

SpectralSolver::SpectralSolver(OperatorSymbols symbols, const ModelParams& params, double rho,
                               double r)
    : symbols_(std::move(symbols)), gamma_(params.gamma), beta_(params.beta), rho_(rho), r_(r),
      fft_u_(symbols_.n), fft_v_(symbols_.n) {
  if (!(rho > 0.0)) throw InvalidArgument("proximal weight rho must be > 0");
  if (!(r > 0.0)) throw InvalidArgument("ADMM penalty r must be > 0");
}

std::pair<ImageGrid, ImageGrid> SpectralSolver::solve(const ImageGrid& f, const ImageGrid& u_k,
                                                      const GradientField& qbar,
                                                      const GradientField& mu) {
  require_same_shape(f, u_k, "solve_uv");
  require_same_shape(f, qbar.dx, "solve_uv");
  require_same_shape(f, mu.dx, "solve_uv");
  const std::size_t n = f.n();
  GradientField m(n);
  for (std::size_t k = 0; k < n * n; ++k) {
    m.dx.data()[k] = mu.dx.data()[k] - r_ * qbar.dx.data()[k];
    m.dy.data()[k] = mu.dy.data()[k] - r_ * qbar.dy.data()[k];
  }
  // rhs_u - rhs_v, formed directly so that f never has to cancel.
  ImageGrid w = grad_adjoint(m);
  double rhs_u_sq = 0.0;
  long double sum_uk = 0.0L;
  for (std::size_t k = 0; k < n * n; ++k) {
    w.data()[k] = rho_ * u_k.data()[k] - w.data()[k];
    const double ru = f.data()[k] + w.data()[k];
    rhs_u_sq += ru * ru;
    sum_uk += u_k.data()[k];
  }
  // D^T(.) has zero mean, so the zero-frequency coefficient of w is exactly
  // rho * sum(u_k). Its determinant is only O(rho + gamma), which would
  // amplify the transform's round-off in that coefficient.
  const double w_dc = rho_ * static_cast<double>(sum_uk);
  return solve_split(w, f, std::sqrt(rhs_u_sq + squared_norm(f)), w_dc);
}

std::pair<ImageGrid, ImageGrid> SpectralSolver::solve_rhs(const ImageGrid& rhs_u,
                                                          const ImageGrid& rhs_v) {
  require_same_shape(rhs_u, rhs_v, "solve_uv");
  ImageGrid w(rhs_u.n());
  for (std::size_t k = 0; k < w.size(); ++k) w.data()[k] = rhs_u.data()[k] - rhs_v.data()[k];
  return solve_split(w, rhs_v, stacked_norm(rhs_u, rhs_v), std::nullopt);
}

std::pair<ImageGrid, ImageGrid> SpectralSolver::solve_split(const ImageGrid& w,
                                                            const ImageGrid& rhs_v,
                                                            double rhs_norm,
                                                            std::optional<double> w_dc) {
  if (w.n() != n()) throw InvalidArgument("solve_uv: grid does not match solver size");

  fft_u_.load(w);
  fft_v_.load(rhs_v);
  fft_u_.forward();
  fft_v_.forward();
  if (w_dc) fft_u_.buffer()[0] = *w_dc;

  // Per frequency, with a = 1 + rho + r sD and d = 1 + gamma + beta sH,
  // [a 1; 1 d] (u, v) = (w + rv, rv). Writing a - 1 = rho + r sD and
  // d - 1 = gamma + beta sH keeps every term positive; near the zero
  // frequency the determinant is O(rho + gamma) and the textbook form
  // a d - 1 would cancel catastrophically.
  auto bw = fft_u_.buffer();
  auto bv = fft_v_.buffer();
  const auto sd = symbols_.sigma_d.data();
  const auto sh = symbols_.sigma_h.data();
  for (std::size_t k = 0; k < bw.size(); ++k) {
    const double am1 = rho_ + r_ * sd[k];
    const double dm1 = gamma_ + beta_ * sh[k];
    const double d = 1.0 + dm1;
    const double det = dm1 + am1 * d;
    const std::complex<double> wk = bw[k];
    const std::complex<double> rv = bv[k];
    bw[k] = (d * wk + dm1 * rv) / det;
    bv[k] = (am1 * rv - wk) / det;
  }

  fft_u_.inverse();
  fft_v_.inverse();

  const std::size_t n = this->n();
  ImageGrid u(n);
  ImageGrid v(n);
  double imag = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) {
    u.data()[k] = bw[k].real();
    v.data()[k] = bv[k].real();
    imag = std::max({imag, std::abs(bw[k].imag()), std::abs(bv[k].imag())});
  }
  const double bound = 1e-9 * rhs_norm;
  if (!(imag <= bound)) {
    throw NumericalError("spectral solve left imaginary residue " + std::to_string(imag) +
                         " above bound " + std::to_string(bound));
  }
  return {std::move(u), std::move(v)};
}

ImageGrid SpectralSolver::solve_smooth(const ImageGrid& residual) {
  if (residual.n() != n()) throw InvalidArgument("solve_smooth: grid does not match solver size");
  fft_v_.load(residual);
  fft_v_.forward();
  auto b = fft_v_.buffer();
  const auto sh = symbols_.sigma_h.data();
  for (std::size_t k = 0; k < b.size(); ++k) b[k] /= 1.0 + gamma_ + beta_ * sh[k];
  fft_v_.inverse();
  ImageGrid v(n());
  double imag = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    v.data()[k] = b[k].real();
    imag = std::max(imag, std::abs(b[k].imag()));
  }
  if (!(imag <= 1e-9 * norm(residual))) {
    throw NumericalError("smooth solve left imaginary residue " + std::to_string(imag));
  }
  return v;
}

std::pair<ImageGrid, ImageGrid> solve_uv(const ImageGrid& f, const ImageGrid& u_k,
                                         const GradientField& qbar, const GradientField& mu,
                                         const OperatorSymbols& symbols, const ModelParams& params,
                                         double rho, double r) {
  SpectralSolver solver(symbols, params, rho, r);
  return solver.solve(f, u_k, qbar, mu);
}

AdmmResult admm_solve(const ImageGrid& f, const ImageGrid& u_k, const ImageGrid& v_k,
                      const ImageGrid& weights, const SupportSet& support,
                      const ModelParams& params, double rho, const AdmmParams& admm,
                      SpectralSolver& solver) {
  admm.validate();
  require_same_shape(f, u_k, "admm_solve");
  require_same_shape(f, v_k, "admm_solve");
  require_same_shape(f, weights, "admm_solve");
  if (support.n() != f.n()) throw InvalidArgument("admm_solve: support shape mismatch");
  if (solver.rho() != rho || solver.r() != admm.r) {
    throw InvalidArgument("admm_solve: solver was built for different rho or r");
  }
  const std::size_t n = f.n();
  const std::size_t nn = n * n;
  const double r = admm.r;

  AdmmResult res;
  res.u = u_k;
  res.v = v_k;
  res.dual.mu = GradientField(n);
  res.dual.q = GradientField(n);
  auto& mu = res.dual.mu;
  auto& q = res.dual.q;

  for (int t = 0; t < admm.maxit_in; ++t) {
    // q-update from the current u.
    const GradientField du = grad(res.u);
    for (std::size_t k = 0; k < nn; ++k) {
      if (support.active(k)) {
        const Vec2 z{du.dx.data()[k] + mu.dx.data()[k] / r, du.dy.data()[k] + mu.dy.data()[k] / r};
        const Vec2 s = shrink_group(z, params.alpha * weights.data()[k] / r);
        q.dx.data()[k] = s[0];
        q.dy.data()[k] = s[1];
      } else {
        q.dx.data()[k] = 0.0;
        q.dy.data()[k] = 0.0;
      }
    }

    auto [u_next, v_next] = solver.solve(f, u_k, q, mu);

    // Multiplier update with the new u.
    const GradientField du_next = grad(u_next);
    double residual = 0.0;
    for (std::size_t k = 0; k < nn; ++k) {
      const double ex = du_next.dx.data()[k] - q.dx.data()[k];
      const double ey = du_next.dy.data()[k] - q.dy.data()[k];
      mu.dx.data()[k] += r * ex;
      mu.dy.data()[k] += r * ey;
      residual = std::max(residual, std::hypot(ex, ey));
    }
    res.primal_residual.push_back(residual);

    const double change = stacked_distance(u_next, v_next, res.u, res.v);
    const double scale = stacked_norm(res.u, res.v);
    res.u = std::move(u_next);
    res.v = std::move(v_next);
    res.iters = t + 1;
    if (change <= admm.tol_in * scale) {
      res.converged = true;
      break;
    }
  }

  const ImageGrid g = grad_norms(grad(res.u));
  for (std::size_t k = 0; k < nn; ++k) {
    res.max_grad = std::max(res.max_grad, g.data()[k]);
    if (!support.active(k)) res.max_constrained_grad = std::max(res.max_constrained_grad, g.data()[k]);
  }
  return res;
}

AdmmResult admm_solve(const ImageGrid& f, const ImageGrid& u_k, const ImageGrid& v_k,
                      const ImageGrid& weights, const SupportSet& support,
                      const ModelParams& params, double rho, const AdmmParams& admm,
                      const OperatorSymbols& symbols) {
  SpectralSolver solver(symbols, params, rho, admm.r);
  return admm_solve(f, u_k, v_k, weights, support, params, rho, admm, solver);
}

} // namespace nlseg
