#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nlseg/admm.hpp"
#include "nlseg/energy.hpp"
#include "nlseg/image.hpp"
#include "nlseg/support.hpp"

namespace nlseg {

struct OuterParams {
  double rho = 1e-8;
  double tol_out = 1e-4;
  int maxit_out = 10;
  /// Support threshold on ||D_i u||. Unset means 1e-8 * max_i ||D_i f||.
  std::optional<double> tau_supp;
  /// After each inner solve, make D_i u exactly zero wherever the subproblem
  /// solution has it zero (Omega_0 and pixels whose q was shrunk to 0) by
  /// projecting u onto that flat set, then re-solve v for the new u.
  bool exact_support = true;

  void validate() const;
};

/// One row per outer iteration k, describing the iterate (u^k, v^k) and the
/// step to (u^{k+1}, v^{k+1}).
struct TraceRow {
  int k = 0;
  double energy = 0.0;           ///< F(u^k, v^k)
  double increment = 0.0;        ///< ||(u^{k+1},v^{k+1}) - (u^k,v^k)||
  std::size_t support_size = 0;  ///< #Omega_1^k
  double min_nonzero_grad = 0.0; ///< min over Omega_1^k of ||D_i u^k||; 0 when empty
  double max_grad = 0.0;         ///< max_i ||D_i u^k||
  int inner_iters = 0;

  bool operator==(const TraceRow&) const = default;
};

using IterationTrace = std::vector<TraceRow>;

struct DecompositionResult {
  ImageGrid u;
  ImageGrid v;
  IterationTrace trace;
  bool converged = false;
  int outer_iters = 0;

  // State of the returned iterate, which the trace rows do not cover.
  double initial_energy = 0.0;
  double final_energy = 0.0;
  SupportSet final_support;
  double final_min_nonzero_grad = 0.0;
  double final_max_grad = 0.0;
  double tau_supp = 0.0;

  /// Number of outer steps whose energy rose by more than 1e-8 * F(u^0, v^0).
  int energy_increase_count = 0;
  /// Largest max over Omega_0 of ||D_i u|| reported by the inner solver.
  double max_constrained_grad = 0.0;
};

/// Shrinks `prev`: a pixel stays active only if it was active and
/// ||D_i u|| > tau_supp.
SupportSet detect_support(const ImageGrid& u, const SupportSet& prev, double tau_supp);

/// Orthogonal projection of u onto {u : D_i u = 0 for every flagged i}.
/// Each flagged pixel is tied to its right and lower neighbours; every
/// connected group of tied pixels takes its mean value.
ImageGrid project_flat(const ImageGrid& u, std::span<const std::uint8_t> flat);

/// min over active pixels of `norms`, 0 when the support is empty.
double min_active(const ImageGrid& norms, const SupportSet& support);

/// Iterative support shrinking with proximal linearization. Starts at
/// (u, v) = (f, f); each outer step linearizes phi at the current gradient
/// magnitudes on Omega_1, solves the constrained convex subproblem with
/// ADMM, and shrinks the support.
DecompositionResult decompose(const ImageGrid& f, const ModelParams& params,
                              const OuterParams& outer = {}, const AdmmParams& admm = {});

} // namespace nlseg
