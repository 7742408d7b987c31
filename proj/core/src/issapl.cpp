#include "nlseg/issapl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlseg/error.hpp"
#include "nlseg/operators.hpp"

namespace nlseg {

void OuterParams::validate() const {
  if (!(rho > 0.0)) throw InvalidArgument("rho must be > 0");
  if (!(tol_out > 0.0)) throw InvalidArgument("tol_out must be > 0");
  if (maxit_out < 1) throw InvalidArgument("maxit_out must be >= 1");
  if (tau_supp && !(*tau_supp >= 0.0)) throw InvalidArgument("tau_supp must be >= 0");
}

SupportSet detect_support(const ImageGrid& u, const SupportSet& prev, double tau_supp) {
  if (prev.n() != u.n()) throw InvalidArgument("detect_support: shape mismatch");
  const ImageGrid g = grad_norms(grad(u));
  SupportSet out(u.n(), false);
  for (std::size_t k = 0; k < g.size(); ++k) {
    out.set(k, prev.active(k) && g.data()[k] > tau_supp);
  }
  return out;
}

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t size) : parent_(size) {
    for (std::size_t i = 0; i < size; ++i) parent_[i] = i;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller index becomes the root so the result does not depend on
    // visiting order.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

private:
  std::vector<std::size_t> parent_;
};

} // namespace

ImageGrid project_flat(const ImageGrid& u, std::span<const std::uint8_t> flat) {
  const std::size_t n = u.n();
  if (flat.size() != u.size()) throw InvalidArgument("project_flat: mask size mismatch");
  DisjointSets sets(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = i * n + j;
      if (!flat[k]) continue;
      sets.unite(k, i * n + (j + 1) % n);
      sets.unite(k, ((i + 1) % n) * n + j);
    }
  }
  std::vector<double> sum(n * n, 0.0);
  std::vector<std::size_t> count(n * n, 0);
  std::vector<std::size_t> root(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    root[k] = sets.find(k);
    sum[root[k]] += u.data()[k];
    ++count[root[k]];
  }
  ImageGrid out(n);
  for (std::size_t k = 0; k < n * n; ++k) {
    out.data()[k] = count[root[k]] == 1 ? u.data()[k]
                                         : sum[root[k]] / static_cast<double>(count[root[k]]);
  }
  return out;
}

double min_active(const ImageGrid& norms, const SupportSet& support) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < norms.size(); ++k) {
    if (support.active(k)) m = std::min(m, norms.data()[k]);
  }
  return std::isinf(m) ? 0.0 : m;
}

DecompositionResult decompose(const ImageGrid& f, const ModelParams& params,
                              const OuterParams& outer, const AdmmParams& admm) {
  outer.validate();
  admm.validate();
  if (f.empty() || !f.all_finite()) throw InvalidArgument("decompose: input must be finite");
  const std::size_t n = f.n();

  DecompositionResult res;
  res.u = f;
  res.v = f;

  ImageGrid norms = grad_norms(grad(res.u));
  const double max_grad_f = norms.max();
  res.tau_supp = outer.tau_supp.value_or(1e-8 * max_grad_f);
  SupportSet support = detect_support(res.u, SupportSet(n, true), res.tau_supp);

  SpectralSolver solver(compute_symbols(n), params, outer.rho, admm.r);

  double energy = eval_F(f, res.u, res.v, params);
  res.initial_energy = energy;
  const double mono_tol = 1e-8 * energy;

  ImageGrid weights(n);
  for (int k = 0; k < outer.maxit_out; ++k) {
    TraceRow row;
    row.k = k;
    row.energy = energy;
    row.support_size = support.count();
    row.min_nonzero_grad = min_active(norms, support);
    row.max_grad = norms.max();

    for (std::size_t i = 0; i < weights.size(); ++i) {
      weights.data()[i] = support.active(i) ? params.potential.derivative(norms.data()[i]) : 0.0;
    }

    AdmmResult inner =
        admm_solve(f, res.u, res.v, weights, support, params, outer.rho, admm, solver);
    res.max_constrained_grad = std::max(res.max_constrained_grad, inner.max_constrained_grad);

    row.inner_iters = inner.iters;
    const double scale = stacked_norm(res.u, res.v);

    if (outer.exact_support) {
      std::vector<std::uint8_t> flat(f.size());
      for (std::size_t i = 0; i < flat.size(); ++i) {
        flat[i] = !support.active(i) ||
                  (inner.dual.q.dx.data()[i] == 0.0 && inner.dual.q.dy.data()[i] == 0.0);
      }
      inner.u = project_flat(inner.u, flat);
      ImageGrid residual(n);
      for (std::size_t i = 0; i < residual.size(); ++i) {
        residual.data()[i] = f.data()[i] - inner.u.data()[i];
      }
      inner.v = solver.solve_smooth(residual);
    }

    row.increment = stacked_distance(inner.u, inner.v, res.u, res.v);
    res.trace.push_back(row);

    res.u = std::move(inner.u);
    res.v = std::move(inner.v);
    res.outer_iters = k + 1;
    support = detect_support(res.u, support, res.tau_supp);
    norms = grad_norms(grad(res.u));

    const double next_energy = eval_F(f, res.u, res.v, params);
    if (next_energy > energy + mono_tol) ++res.energy_increase_count;
    energy = next_energy;

    if (row.increment <= outer.tol_out * scale) {
      res.converged = true;
      break;
    }
  }

  res.final_energy = energy;
  res.final_support = support;
  res.final_min_nonzero_grad = min_active(norms, support);
  res.final_max_grad = norms.max();
  return res;
}

} // namespace nlseg
