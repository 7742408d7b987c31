#pragma once

#include "nlseg/image.hpp"
#include "nlseg/potential.hpp"
#include "nlseg/support.hpp"

namespace nlseg {

/// Weights of the decomposition model
///   F(u,v) = 1/2 ||f-u-v||^2 + alpha sum_i phi(||D_i u||) + beta/2 ||Hv||^2 + gamma/2 ||v||^2.
struct ModelParams {
  static constexpr double kDefaultGamma = 1e-8;

  ModelParams(double alpha, double beta, double gamma = kDefaultGamma,
              PotentialSpec potential = PotentialSpec{});

  double alpha;
  double beta;
  double gamma;
  PotentialSpec potential;
};

/// Full objective F(u, v). The phi-sum runs over all pixels.
double eval_F(const ImageGrid& f, const ImageGrid& u, const ImageGrid& v, const ModelParams& params);

struct GkValue {
  double value = 0.0;
  /// max over Omega_0 of ||D_i u||; the constraint D_i u = 0 there.
  double max_constrained_grad = 0.0;
  /// max_constrained_grad <= tau; when false the constrained value is +inf.
  bool feasible = true;
};

/// Linearized, proximal subproblem objective
///   1/2||f-u-v||^2 + alpha sum_{Omega_1} w_i ||D_i u|| + rho/2 ||u-u_prev||^2
///   + beta/2 ||Hv||^2 + gamma/2 ||v||^2,
/// with Omega_0 feasibility reported against `tau`.
GkValue eval_Gk(const ImageGrid& f, const ImageGrid& u, const ImageGrid& v, const ImageGrid& u_prev,
                const ImageGrid& weights, const SupportSet& support, const ModelParams& params,
                double rho, double tau = 0.0);

} // namespace nlseg
