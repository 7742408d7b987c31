#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlseg/error.hpp"
#include "nlseg/potential.hpp"

using namespace nlseg;

static_assert(Potential<PowerPotential>);

TEST(PowerPotential, RejectsExponentOutsideUnitInterval) {
  EXPECT_THROW(PowerPotential(0.0), InvalidArgument);
  EXPECT_THROW(PowerPotential(1.0), InvalidArgument);
  EXPECT_THROW(PowerPotential(-0.5), InvalidArgument);
  EXPECT_THROW(PowerPotential(NAN), InvalidArgument);
  EXPECT_NO_THROW(PowerPotential(0.999));
}

TEST(Phi, Examples) {
  const PotentialSpec spec;
  EXPECT_EQ(spec.exponent(), 0.5);
  EXPECT_EQ(phi(spec, 0.0), 0.0);
  EXPECT_EQ(phi(spec, 4.0), 2.0);
  EXPECT_NEAR(phi(spec, 2.0), std::sqrt(2.0), 1e-12);
  EXPECT_THROW(phi(spec, -1e-300), InvalidArgument);
}

TEST(PhiPrime, Examples) {
  const PotentialSpec spec;
  EXPECT_EQ(phi_prime(spec, 1.0), 0.5);
  EXPECT_NEAR(phi_prime(spec, 4.0), 0.25, 1e-15);
  EXPECT_NEAR(phi_prime(spec, 0.01), 5.0, 1e-12);
  EXPECT_THROW(phi_prime(spec, 0.0), InvalidArgument);
  EXPECT_THROW(phi_prime(spec, -2.0), InvalidArgument);
}

TEST(Potential, Concavity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(0.0, 10.0), lam(0.0, 1.0), p(0.05, 0.95);
  for (int trial = 0; trial < 1000; ++trial) {
    const PowerPotential spec(p(rng));
    double a = t(rng), b = t(rng);
    if (a > b) std::swap(a, b);
    const double l = lam(rng);
    EXPECT_GE(phi(spec, l * a + (1 - l) * b), l * phi(spec, a) + (1 - l) * phi(spec, b) - 1e-12);
  }
}

TEST(Potential, DerivativeMatchesCentralDifference) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> t(0.1, 10.0);
  const PotentialSpec spec;
  for (int trial = 0; trial < 200; ++trial) {
    const double x = t(rng);
    const double h = 1e-5 * x;
    const double fd = (phi(spec, x + h) - phi(spec, x - h)) / (2 * h);
    EXPECT_NEAR(fd, phi_prime(spec, x), 1e-6 * phi_prime(spec, x));
  }
}

TEST(Potential, DerivativeDecreasing) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> t(1e-6, 100.0);
  const PotentialSpec spec;
  for (int trial = 0; trial < 500; ++trial) {
    double a = t(rng), b = t(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    EXPECT_GT(phi_prime(spec, a), phi_prime(spec, b));
  }
}
