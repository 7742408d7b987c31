#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "nlseg/error.hpp"
#include "nlseg/imgio.hpp"
#include "nlseg/issapl.hpp"
#include "nlseg/operators.hpp"
#include "nlseg/synth.hpp"
#include "support/random.hpp"

using namespace nlseg;
using nlseg::testing::random_grid;

TEST(OuterParams, DefaultsAndValidation) {
  const OuterParams o;
  EXPECT_EQ(o.rho, 1e-8);
  EXPECT_EQ(o.tol_out, 1e-4);
  EXPECT_EQ(o.maxit_out, 10);
  EXPECT_FALSE(o.tau_supp.has_value());
  EXPECT_NO_THROW(o.validate());
  OuterParams bad;
  bad.rho = 0.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = OuterParams{};
  bad.maxit_out = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = OuterParams{};
  bad.tau_supp = -1.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(DetectSupport, ConstantImageIsEmpty) {
  EXPECT_EQ(detect_support(ImageGrid(5, 0.4), SupportSet(5, true), 0.0).count(), 0u);
}

TEST(DetectSupport, SinglePixelBump) {
  const std::size_t n = 5;
  ImageGrid u(n, 0.0);
  u(2, 3) = 1.0;
  const SupportSet s = detect_support(u, SupportSet(n, true), 1e-12);
  // Forward differences touching (2,3): the pixel itself, its left neighbour
  // (dx) and the pixel above (dy).
  EXPECT_EQ(s.count(), 3u);
  EXPECT_TRUE(s.active(2, 3));
  EXPECT_TRUE(s.active(2, 2));
  EXPECT_TRUE(s.active(1, 3));
}

TEST(DetectSupport, NestingWins) {
  const std::size_t n = 4;
  ImageGrid u(n, 0.0);
  u(0, 1) = 1.0;  // ||D u|| = 1 at (0,0)
  SupportSet prev(n, true);
  prev.set(0, 0, false);
  const SupportSet s = detect_support(u, prev, 0.0);
  EXPECT_FALSE(s.active(0, 0));
  EXPECT_TRUE(s.subset_of(prev));
}

TEST(DetectSupport, ShapeMismatch) {
  EXPECT_THROW(detect_support(ImageGrid(4), SupportSet(5), 0.0), InvalidArgument);
}

TEST(ProjectFlat, IsOrthogonalProjection) {
  std::mt19937_64 rng(41);
  const std::size_t n = 8;
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 20; ++trial) {
    const ImageGrid u = random_grid(n, rng);
    std::vector<std::uint8_t> flat(n * n);
    for (auto& x : flat) x = coin(rng);
    const ImageGrid pu = project_flat(u, flat);
    const ImageGrid ppu = project_flat(pu, flat);
    for (std::size_t k = 0; k < pu.size(); ++k) EXPECT_NEAR(ppu.data()[k], pu.data()[k], 1e-15);
    const GradientField g = grad(pu);
    for (std::size_t k = 0; k < flat.size(); ++k) {
      if (flat[k]) {
        EXPECT_NEAR(g.dx.data()[k], 0.0, 1e-15);
        EXPECT_NEAR(g.dy.data()[k], 0.0, 1e-15);
      }
    }
    double cross = 0.0, total = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      cross += (u.data()[k] - pu.data()[k]) * pu.data()[k];
      total += u.data()[k] - pu.data()[k];
    }
    EXPECT_NEAR(cross, 0.0, 1e-12);
    EXPECT_NEAR(total, 0.0, 1e-12);
  }
}

TEST(ProjectFlat, EmptyMaskIsIdentity) {
  std::mt19937_64 rng(42);
  const ImageGrid u = random_grid(6, rng);
  EXPECT_EQ(project_flat(u, std::vector<std::uint8_t>(36, 0)), u);
  EXPECT_THROW(project_flat(u, std::vector<std::uint8_t>(35, 0)), InvalidArgument);
}

TEST(MinActive, Basics) {
  ImageGrid g = ImageGrid::from_rows({{3, 1}, {2, 0.5}});
  SupportSet s(2, false);
  EXPECT_EQ(min_active(g, s), 0.0);
  s.set(0, 0, true);
  s.set(1, 0, true);
  EXPECT_EQ(min_active(g, s), 2.0);
}

TEST(Decompose, ConstantImage) {
  const ImageGrid f(16, 0.45);
  const DecompositionResult r = decompose(f, ModelParams(0.1, 100.0));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.outer_iters, 2);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().support_size, 0u);
  double err = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) err = std::max(err, std::abs(r.u.data()[k] - 0.45));
  EXPECT_LE(err, 1e-6 * norm(f));
  EXPECT_LE(r.v.max(), 1e-6);
  EXPECT_GE(r.v.min(), -1e-6);
}

TEST(Decompose, TwoPhasePhantomIsNearlyBinary) {
  const Phantom ph = generate(two_phase_preset(64, 0.02, 0.0, Composition::additive, 3));
  const DecompositionResult r = decompose(ph.f, ModelParams(0.1, 100.0));
  // Modes of u: the fullest 0.01-wide bin, then the fullest bin at least 0.1
  // away from it.
  std::map<long, std::size_t> hist;
  for (double x : r.u.data()) ++hist[std::lround(x * 100.0)];
  auto fullest = [&](auto keep) {
    long best = 0;
    std::size_t count = 0;
    for (const auto& [bin, c] : hist) {
      if (keep(bin) && c > count) {
        best = bin;
        count = c;
      }
    }
    return static_cast<double>(best) / 100.0;
  };
  const double m1 = fullest([](long) { return true; });
  const double m2 = fullest([&](long bin) { return std::abs(bin / 100.0 - m1) >= 0.1; });
  std::size_t intermediate = 0;
  for (double x : r.u.data()) {
    if (std::abs(x - m1) > 0.05 && std::abs(x - m2) > 0.05) ++intermediate;
  }
  EXPECT_LE(intermediate, r.u.size() / 20);
  // The modes sit near the phase values; the model trades some contrast for
  // a shorter jump set.
  EXPECT_NEAR(std::min(m1, m2), 0.3, 0.05);
  EXPECT_NEAR(std::max(m1, m2), 0.8, 0.1);
}

namespace {

void expect_trace_invariants(const DecompositionResult& r) {
  const double mono_tol = 1e-8 * r.initial_energy;
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    EXPECT_LE(r.trace[k].energy, r.trace[k - 1].energy + mono_tol) << "k = " << k;
    EXPECT_LE(r.trace[k].support_size, r.trace[k - 1].support_size) << "k = " << k;
  }
  EXPECT_LE(r.final_energy, r.trace.back().energy + mono_tol);
  EXPECT_LE(r.final_support.count(), r.trace.back().support_size);
  EXPECT_EQ(r.energy_increase_count, 0);
  EXPECT_EQ(r.trace.front().energy, r.initial_energy);
}

} // namespace

TEST(Decompose, TraceInvariantsOnBiasedPhantoms) {
  const Phantom two = generate(two_phase_preset(64, 0.02, 0.3, Composition::multiplicative, 4));
  const ImageGrid f2 = to_log_domain(two.f);
  const DecompositionResult r2 = decompose(f2, ModelParams(0.3, 1000.0));
  expect_trace_invariants(r2);

  const Phantom five = generate(five_phase_preset(64, 0.02, 0.3, Composition::additive, 4));
  const DecompositionResult r5 = decompose(five.f, ModelParams(0.05, 1000.0));
  expect_trace_invariants(r5);

  // The bias component is smoother than the observation.
  EXPECT_LE(squared_norm(hessian(r2.v)), squared_norm(hessian(f2)));
  EXPECT_LE(squared_norm(hessian(r5.v)), squared_norm(hessian(five.f)));
}

TEST(Decompose, TraceRowsDescribeIterates) {
  const Phantom ph = generate(two_phase_preset(32, 0.02, 0.2, Composition::additive, 5));
  const DecompositionResult r = decompose(ph.f, ModelParams(0.1, 1000.0));
  ASSERT_EQ(r.trace.size(), static_cast<std::size_t>(r.outer_iters));
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    EXPECT_EQ(r.trace[k].k, static_cast<int>(k));
    EXPECT_GE(r.trace[k].inner_iters, 1);
    EXPECT_LE(r.trace[k].min_nonzero_grad, r.trace[k].max_grad);
  }
  EXPECT_EQ(r.trace.front().max_grad, grad_norms(grad(ph.f)).max());
  if (r.converged) {
    EXPECT_LE(r.trace.back().increment, 1e-4 * stacked_norm(r.u, r.v) * 1.0001 + 1e-12);
  }
}

TEST(Decompose, Deterministic) {
  const Phantom ph = generate(five_phase_preset(32, 0.02, 0.2, Composition::additive, 6));
  const DecompositionResult a = decompose(ph.f, ModelParams(0.05, 1000.0));
  const DecompositionResult b = decompose(ph.f, ModelParams(0.05, 1000.0));
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Decompose, PenaltyOnlyModeRuns) {
  // Without the exact-support step the Omega_0 constraints are held by the
  // ADMM penalty alone.
  const Phantom ph = generate(two_phase_preset(32, 0.02, 0.0, Composition::additive, 7));
  OuterParams outer;
  outer.exact_support = false;
  const DecompositionResult r = decompose(ph.f, ModelParams(0.1, 100.0), outer);
  EXPECT_TRUE(r.u.all_finite());
  EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.outer_iters));
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    EXPECT_LE(r.trace[k].support_size, r.trace[k - 1].support_size);
  }
}

TEST(Decompose, RejectsNonFiniteInput) {
  EXPECT_THROW(decompose(ImageGrid(), ModelParams(0.1, 1.0)), InvalidArgument);
}
