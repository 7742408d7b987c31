#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nlseg/energy.hpp"
#include "nlseg/fft.hpp"
#include "nlseg/image.hpp"
#include "nlseg/operators.hpp"
#include "nlseg/support.hpp"

namespace nlseg {

/// Inner ADMM settings. One penalty r is shared by the q = D_i u and the
/// D_i u = 0 constraint groups.
struct AdmmParams {
  double r = 10.0;
  double tol_in = 1e-4;
  int maxit_in = 100;

  void validate() const;
};

using Vec2 = std::array<double, 2>;

/// Proximal map of threshold * ||.|| on R^2: max(1 - threshold/||z||, 0) z.
Vec2 shrink_group(Vec2 z, double threshold);

/// Solves the coupled (u, v) optimality system
///   (1 + rho + r D^T D) u + v = f + rho u_k - D^T(mu - r qbar)
///   u + (1 + gamma + beta H^T H) v = f
/// by diagonalizing both operators with the 2D FFT and inverting the 2x2
/// system at every frequency. Owns its FFT plans so it can be reused across
/// ADMM iterations.
class SpectralSolver {
public:
  SpectralSolver(OperatorSymbols symbols, const ModelParams& params, double rho, double r);

  [[nodiscard]] std::size_t n() const noexcept { return symbols_.n; }
  [[nodiscard]] const OperatorSymbols& symbols() const noexcept { return symbols_; }
  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] double r() const noexcept { return r_; }

  /// Returns (u, v). Throws NumericalError when the inverse transform leaves
  /// an imaginary part above 1e-9 * ||rhs||.
  std::pair<ImageGrid, ImageGrid> solve(const ImageGrid& f, const ImageGrid& u_k,
                                        const GradientField& qbar, const GradientField& mu);

  /// Exact minimizer over v of 1/2||residual - v||^2 + beta/2||Hv||^2 + gamma/2||v||^2.
  ImageGrid solve_smooth(const ImageGrid& residual);

  /// Solves with explicit right-hand sides (rhs_u, rhs_v).
  std::pair<ImageGrid, ImageGrid> solve_rhs(const ImageGrid& rhs_u, const ImageGrid& rhs_v);

private:
  // w = rhs_u - rhs_v; rhs_norm scales the imaginary-residue check. When
  // given, w_dc replaces the computed zero-frequency coefficient of w.
  std::pair<ImageGrid, ImageGrid> solve_split(const ImageGrid& w, const ImageGrid& rhs_v,
                                              double rhs_norm, std::optional<double> w_dc);

  OperatorSymbols symbols_;
  double gamma_;
  double beta_;
  double rho_;
  double r_;
  Fft2d fft_u_;
  Fft2d fft_v_;
};

/// One-shot convenience wrapper around SpectralSolver::solve.
std::pair<ImageGrid, ImageGrid> solve_uv(const ImageGrid& f, const ImageGrid& u_k,
                                         const GradientField& qbar, const GradientField& mu,
                                         const OperatorSymbols& symbols, const ModelParams& params,
                                         double rho, double r);

/// Multiplier and auxiliary variable of the split problem. q is identically
/// zero on Omega_0.
struct DualState {
  GradientField mu;
  GradientField q;
};

struct AdmmResult {
  ImageGrid u;
  ImageGrid v;
  int iters = 0;
  bool converged = false;
  DualState dual;
  /// max_i ||D_i u - qbar_i|| after each iteration.
  std::vector<double> primal_residual;
  /// max over Omega_0 of ||D_i u|| at termination.
  double max_constrained_grad = 0.0;
  /// max over all pixels of ||D_i u|| at termination.
  double max_grad = 0.0;
};

/// ADMM for the linearized support-constrained subproblem. Starts from
/// (u_k, v_k) with mu = 0; each sweep updates q by group shrinkage on
/// Omega_1 (zero on Omega_0), then (u, v) by the spectral solve, then mu.
/// Stops when ||(u,v)^{t+1} - (u,v)^t|| <= tol_in ||(u,v)^t|| or after
/// maxit_in sweeps.
AdmmResult admm_solve(const ImageGrid& f, const ImageGrid& u_k, const ImageGrid& v_k,
                      const ImageGrid& weights, const SupportSet& support,
                      const ModelParams& params, double rho, const AdmmParams& admm,
                      SpectralSolver& solver);

AdmmResult admm_solve(const ImageGrid& f, const ImageGrid& u_k, const ImageGrid& v_k,
                      const ImageGrid& weights, const SupportSet& support,
                      const ModelParams& params, double rho, const AdmmParams& admm,
                      const OperatorSymbols& symbols);

} // namespace nlseg
