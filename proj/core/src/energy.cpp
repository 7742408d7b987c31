#include "nlseg/energy.hpp"

#include <algorithm>
#include <cmath>

#include "nlseg/error.hpp"
#include "nlseg/operators.hpp"

namespace nlseg {

ModelParams::ModelParams(double alpha_, double beta_, double gamma_, PotentialSpec potential_)
    : alpha(alpha_), beta(beta_), gamma(gamma_), potential(potential_) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0)) {
    throw InvalidArgument("model weights alpha, beta, gamma must be > 0");
  }
}

namespace {

double fidelity(const ImageGrid& f, const ImageGrid& u, const ImageGrid& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double r = f.data()[k] - u.data()[k] - v.data()[k];
    s += r * r;
  }
  return 0.5 * s;
}

double smooth_terms(const ImageGrid& v, const ModelParams& params) {
  return 0.5 * params.beta * squared_norm(hessian(v)) + 0.5 * params.gamma * squared_norm(v);
}

} // namespace

double eval_F(const ImageGrid& f, const ImageGrid& u, const ImageGrid& v, const ModelParams& params) {
  require_same_shape(f, u, "eval_F");
  require_same_shape(f, v, "eval_F");
  const ImageGrid g = grad_norms(grad(u));
  double reg = 0.0;
  for (double t : g.data()) reg += params.potential.value(t);
  return fidelity(f, u, v) + params.alpha * reg + smooth_terms(v, params);
}

GkValue eval_Gk(const ImageGrid& f, const ImageGrid& u, const ImageGrid& v, const ImageGrid& u_prev,
                const ImageGrid& weights, const SupportSet& support, const ModelParams& params,
                double rho, double tau) {
  require_same_shape(f, u, "eval_Gk");
  require_same_shape(f, v, "eval_Gk");
  require_same_shape(f, u_prev, "eval_Gk");
  require_same_shape(f, weights, "eval_Gk");
  if (support.n() != f.n()) throw InvalidArgument("eval_Gk: support shape mismatch");

  const ImageGrid g = grad_norms(grad(u));
  GkValue out;
  double reg = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (support.active(k)) {
      reg += weights.data()[k] * g.data()[k];
    } else {
      out.max_constrained_grad = std::max(out.max_constrained_grad, g.data()[k]);
    }
  }
  double prox = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double d = u.data()[k] - u_prev.data()[k];
    prox += d * d;
  }
  out.value = fidelity(f, u, v) + params.alpha * reg + 0.5 * rho * prox + smooth_terms(v, params);
  out.feasible = out.max_constrained_grad <= tau;
  return out;
}

} // namespace nlseg
