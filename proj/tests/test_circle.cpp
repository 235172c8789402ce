#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "polychain/circle.hpp"

using namespace polychain;

namespace {

constexpr double kPi = std::numbers::pi;

CircleConfig random_config(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  std::vector<double> a(n);
  for (double& t : a) t = u(rng);
  return CircleConfig(a);
}

double grid_min_g(const CircleConfig& cfg, int steps) {
  double best = INFINITY;
  for (int k = 0; k < steps; ++k) {
    const double t = 2 * kPi * (k + 0.5) / steps;
    double s = 0.0;
    for (double tj : cfg.angles) s += 1.0 / std::norm(std::polar(1.0, t) - std::polar(1.0, tj));
    best = std::min(best, s);
  }
  return best;
}

double grid_max_prod(const CircleConfig& cfg, int steps) {
  double best = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t = 2 * kPi * k / steps;
    double p = 1.0;
    for (double tj : cfg.angles) p *= std::abs(std::polar(1.0, t) - std::polar(1.0, tj));
    best = std::max(best, p);
  }
  return best;
}

std::vector<Complex> nth_roots_of_minus_one(std::size_t n) {
  std::vector<Complex> r;
  for (std::size_t k = 0; k < n; ++k) r.push_back(std::polar(1.0, kPi * (2.0 * k + 1.0) / n));
  return r;
}

double match_error(std::vector<Complex> want, std::vector<Complex> got) {
  if (want.size() != got.size()) return INFINITY;
  double worst = 0.0;
  for (const Complex& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](Complex a, Complex b) { return std::abs(a - w) < std::abs(b - w); });
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return worst;
}

}  // namespace

TEST(CircleConfig, WrapsAndConverts) {
  const CircleConfig c({-kPi / 2, 5 * kPi});
  EXPECT_NEAR(c.angles[0], 1.5 * kPi, 1e-15);
  EXPECT_NEAR(c.angles[1], kPi, 1e-14);
  const std::vector<double> turns{0.25, 0.5};
  EXPECT_NEAR(CircleConfig::from_turns(turns).angles[0], kPi / 2, 1e-15);
  EXPECT_NEAR(CircleConfig::from_turns(turns).turns()[1], 0.5, 1e-15);
  EXPECT_THROW(CircleConfig({NAN}), std::invalid_argument);
}

TEST(GSum, Examples) {
  EXPECT_DOUBLE_EQ(g_sum(CircleConfig({0.0}), kPi), 0.25);
  EXPECT_NEAR(g_sum(CircleConfig({0.0, kPi}), kPi / 2), 1.0, 1e-15);
  EXPECT_THROW(g_sum(CircleConfig({1.0}), 1.0), std::domain_error);
}

TEST(GSum, EquallySpacedClosedForm) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (std::size_t n = 1; n <= 12; ++n) {
    const double rot = u(rng);
    const CircleConfig cfg = CircleConfig::roots_of_unity(n, rot);
    for (int i = 0; i < 20; ++i) {
      const double t = u(rng);
      const Complex z = std::polar(1.0, t);
      const Complex rho = std::polar(1.0, rot);
      const double want = static_cast<double>(n * n) / std::norm(std::pow(z, static_cast<double>(n)) - std::pow(rho, static_cast<double>(n)));
      EXPECT_NEAR(g_sum(cfg, t), want, 1e-9 * want);
    }
  }
}

TEST(GSum, DerivativeMatchesFiniteDifference) {
  const CircleConfig cfg({0.1, 1.3, 2.0, 4.4});
  for (double t : {0.5, 1.7, 3.0, 5.5}) {
    const double h = 1e-6;
    const double fd = (g_sum(cfg, t + h) - g_sum(cfg, t - h)) / (2 * h);
    EXPECT_NEAR(g_sum_derivative(cfg, t), fd, 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST(Minimize, RootsOfUnityFour) {
  const ArcMinima m = minimize_on_circle(CircleConfig::roots_of_unity(4));
  EXPECT_NEAR(m.M, 4.0, 1e-12);
  ASSERT_EQ(m.arcs.size(), 4U);
  for (const auto& a : m.arcs) EXPECT_NEAR(a.value, 4.0, 1e-12);
}

TEST(Minimize, SinglePointAntipode) {
  const ArcMinima m = minimize_on_circle(CircleConfig({0.7}));
  EXPECT_NEAR(m.M, 0.25, 1e-15);
  EXPECT_NEAR(m.argmin, 0.7 + kPi, 1e-10);
  EXPECT_THROW(minimize_on_circle(CircleConfig{}), std::invalid_argument);
}

TEST(Minimize, CoincidentPointsGiveInfiniteArc) {
  const ArcMinima m = minimize_on_circle(CircleConfig({1.0, 1.0, 3.0}));
  ASSERT_EQ(m.arcs.size(), 3U);
  int infinite = 0;
  for (const auto& a : m.arcs) infinite += std::isinf(a.value) ? 1 : 0;
  EXPECT_EQ(infinite, 1);
  EXPECT_TRUE(std::isfinite(m.M));
}

TEST(Minimize, AgreesWithDenseGridAndBound) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const CircleConfig cfg = random_config(rng, 2 + trial % 9);
    const ArcMinima m = minimize_on_circle(cfg);
    const double grid = grid_min_g(cfg, 100000);
    EXPECT_LE(m.M, grid * (1.0 + 1e-12));
    EXPECT_NEAR(m.M, grid, 1e-5 * grid);
    const double n = static_cast<double>(cfg.size());
    EXPECT_LE(m.M, n * n / 4.0 + 1e-9);
  }
}

TEST(Minimize, SevenPointsBelowBound) {
  std::mt19937_64 rng(70);
  EXPECT_LE(minimize_on_circle(random_config(rng, 7)).M, 49.0 / 4.0 + 1e-9);
}

TEST(Minimize, RotationCovariance) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const CircleConfig cfg = random_config(rng, 5);
    const double delta = 0.9;
    std::vector<double> rotated = cfg.angles;
    for (double& t : rotated) t += delta;
    const ArcMinima a = minimize_on_circle(cfg);
    const ArcMinima b = minimize_on_circle(CircleConfig(rotated));
    EXPECT_NEAR(a.M, b.M, 1e-10 * a.M);
    EXPECT_NEAR(std::abs(std::remainder(b.argmin - a.argmin - delta, 2 * kPi)), 0.0, 1e-8);
  }
}

TEST(ChebyshevSup, Examples) {
  for (std::size_t n = 1; n <= 12; ++n) EXPECT_NEAR(chebyshev_sup(CircleConfig::roots_of_unity(n, 0.3)), 2.0, 1e-10);
  EXPECT_NEAR(chebyshev_sup(CircleConfig({2.0})), 2.0, 1e-12);
}

TEST(ChebyshevSup, AtLeastTwoAndMatchesGrid) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const CircleConfig cfg = random_config(rng, 1 + trial % 10);
    const double s = chebyshev_sup(cfg);
    EXPECT_GE(s, 2.0 - 1e-9);
    if (trial % 20 == 0) {
      const double grid = grid_max_prod(cfg, 200000);
      EXPECT_GE(s, grid * (1.0 - 1e-12));
      EXPECT_NEAR(s, grid, 1e-6 * s);
    }
  }
}

TEST(SumWithUnimodular, MonomialGivesRootsOfMinusOne) {
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto r = sum_with_unimodular(ComplexPolynomial::monomial(n), 1.0);
    EXPECT_LT(match_error(nth_roots_of_minus_one(n), r), 1e-10) << n;
  }
}

TEST(SumWithUnimodular, ConstantHasNoRoots) {
  EXPECT_TRUE(sum_with_unimodular(ComplexPolynomial({Complex(0.5, 0.2)}), Complex(0.0, 1.0)).empty());
}

TEST(SumWithUnimodular, Errors) {
  EXPECT_THROW(sum_with_unimodular(ComplexPolynomial(), 1.0), std::invalid_argument);
  EXPECT_THROW(sum_with_unimodular(ComplexPolynomial::monomial(2), 1.1), std::invalid_argument);
  const std::vector<Complex> mixed{0.5, 2.0};
  EXPECT_THROW(sum_with_unimodular(ComplexPolynomial::from_roots(mixed), 1.0), std::invalid_argument);
}

TEST(SumWithUnimodular, RootsOutsideDisc) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Complex> r(1 + trial % 12);
    for (Complex& x : r) x = std::polar(1.0 + 3.0 * u(rng), 2 * kPi * u(rng));
    const ComplexPolynomial g = ComplexPolynomial::from_roots(r, std::polar(1.0, 2 * kPi * u(rng)));
    const Complex gamma = std::polar(1.0, 2 * kPi * u(rng));
    const auto out = sum_with_unimodular(g, gamma);
    ASSERT_EQ(out.size(), r.size());
    for (const Complex& x : out) {
      EXPECT_NEAR(std::abs(x), 1.0, 1e-8);
      // Independent check that x is a root: |g(x)| = |g*(x)| on T and the sum vanishes.
      EXPECT_LT(std::abs(g(x) + gamma * reciprocal(g)(x)), 1e-8 * (1.0 + std::abs(g(x))));
    }
  }
}

TEST(DerivativeShift, Examples) {
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<Complex> c(n + 1, 0.0);
    c[0] = -1.0;
    c[n] = 1.0;
    EXPECT_LT(match_error(nth_roots_of_minus_one(n), derivative_shift_roots(ComplexPolynomial(c))), 1e-10) << n;
  }
  const auto r = derivative_shift_roots(ComplexPolynomial({-1.0, 1.0}));
  ASSERT_EQ(r.size(), 1U);
  EXPECT_NEAR(std::abs(r[0] + 1.0), 0.0, 1e-15);
}

TEST(DerivativeShift, RejectsRootsOffCircle) {
  const std::vector<Complex> r{0.5, 1.0};
  EXPECT_THROW(derivative_shift_roots(ComplexPolynomial::from_roots(r)), std::invalid_argument);
  EXPECT_THROW(derivative_shift_roots(ComplexPolynomial({2.0})), std::invalid_argument);
}

TEST(Fejer, NumeratorIsGTimesSquaredProduct) {
  // On the circle N(u) = alpha^2 G(u) prod (u - z_k)^2.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const CircleConfig cfg = random_config(rng, 1 + trial % 8);
    Complex alpha2;
    const ComplexPolynomial N = fejer_numerator(cfg, &alpha2);
    EXPECT_EQ(N.degree(), 2 * cfg.size() - 1);
    EXPECT_NEAR(std::abs(alpha2), 1.0, 1e-12);
    const double t = u(rng);
    const Complex w = std::polar(1.0, t);
    Complex q = 1.0;
    for (const Complex& z : cfg.points()) q *= (w - z) * (w - z);
    const Complex want = alpha2 * g_sum(cfg, t) * q;
    EXPECT_LT(std::abs(N(w) - want), 1e-9 * (1.0 + std::abs(want)));
  }
}

TEST(Fejer, SinglePoint) {
  const FejerFactor f = fejer_factorize(CircleConfig({0.0}));
  EXPECT_EQ(f.g.degree(), 1U);
  EXPECT_LT(f.residual, 1e-12);
}

TEST(Fejer, ReconstructsNumeratorOnRandomConfigs) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int trial = 0; trial < 200; ++trial) {
    const CircleConfig cfg = random_config(rng, 1 + trial % 10);
    const FejerFactor f = fejer_factorize(cfg);
    EXPECT_LT(f.residual, 1e-7);
    EXPECT_EQ(f.g.degree(), cfg.size());
    const double arg = std::arg(f.alpha);
    EXPECT_GE(arg, 0.0);
    EXPECT_LT(arg, kPi);
    for (const Complex& r : f.roots) EXPECT_LE(std::abs(r), 1.0 + 1e-9);
    // Independent check at fresh points: g g* = N.
    const ComplexPolynomial gs = reciprocal(f.g, cfg.size());
    for (int k = 0; k < 8; ++k) {
      const Complex w = std::polar(1.0, u(rng));
      const Complex n = f.numerator(w);
      EXPECT_LT(std::abs(f.g(w) * gs(w) - n), 1e-6 * std::abs(n) + 1e-9);
    }
  }
}

TEST(Fejer, RootsOfUnityAllAtOrigin) {
  // Here N is a multiple of z^n, so g is a multiple of z^n.
  const FejerFactor f = fejer_factorize(CircleConfig::roots_of_unity(6));
  for (const Complex& r : f.roots) EXPECT_LT(std::abs(r), 1e-6);
}

TEST(Phi, RootsOfUnityFixed) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (std::size_t n = 1; n <= 16; ++n) {
    for (int k = 0; k < 8; ++k) {
      const CircleConfig cfg = CircleConfig::roots_of_unity(n, u(rng));
      EXPECT_LT(config_distance(phi_iterate(cfg), cfg), 1e-8) << n;
    }
  }
}

TEST(Phi, AntipodalPairFixed) {
  const CircleConfig cfg({0.4, 0.4 + kPi});
  EXPECT_LT(config_distance(phi_iterate(cfg), cfg), 1e-10);
}

TEST(Phi, FivePointConfigImproves) {
  const std::vector<double> turns{0.0, 0.2, 0.25, 0.375, 0.625};
  const CircleConfig cfg = CircleConfig::from_turns(turns);
  const auto traj = phi_trajectory(cfg, 4);
  ASSERT_EQ(traj.size(), 5U);
  for (std::size_t s = 1; s < traj.size(); ++s) EXPECT_GT(traj[s].M, traj[s - 1].M);
  EXPECT_LE(traj.back().M, 25.0 / 4.0);
}

TEST(Phi, CoincidentPointsRejected) {
  EXPECT_THROW(phi_iterate(CircleConfig({1.0, 1.0, 2.0})), std::invalid_argument);
  EXPECT_THROW(phi_iterate(CircleConfig{}), std::invalid_argument);
}

TEST(Phi, TrajectoryStopsAtFixedPoint) {
  const auto traj = phi_trajectory(CircleConfig::roots_of_unity(8), 5, 1e-9);
  ASSERT_EQ(traj.size(), 2U);
  EXPECT_NEAR(traj[1].M, 16.0, 1e-9);
}

TEST(ConfigDistance, ShiftInvariant) {
  const CircleConfig a({0.0, 1.0, 2.0});
  const CircleConfig b({2.0 + 1e-3, 0.0, 1.0});
  EXPECT_NEAR(config_distance(a, b), 1e-3, 1e-12);
  EXPECT_TRUE(std::isinf(config_distance(a, CircleConfig({0.0}))));
}

TEST(Cosform, Examples) {
  EXPECT_NEAR(cosform_residual(1, kPi), 0.0, 1e-14);
  for (std::size_t n = 1; n <= 20; ++n) {
    const double nn = static_cast<double>(n);
    // t = pi/n: the right side is 2 n^2 / 2.
    EXPECT_LT(cosform_residual(n, kPi / nn), 1e-9 * nn * nn);
  }
  EXPECT_THROW(cosform_residual(4, 0.0), std::domain_error);
  EXPECT_THROW(cosform_residual(0, 1.0), std::invalid_argument);
}

TEST(Cosform, RandomPointsRelative) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    const double rhs = 2.0 * 256.0 / (1.0 - std::cos(16.0 * t));
    EXPECT_LT(cosform_residual(16, t) / rhs, 1e-8);
  }
}

TEST(Riesz, Examples) {
  EXPECT_NEAR(riesz_node_sum(1), 1.0, 1e-15);
  EXPECT_NEAR(riesz_node_sum(2), 4.0, 1e-14);
  EXPECT_NEAR(riesz_node_sum(100), 1e4, 1e-2);
  EXPECT_THROW(riesz_node_sum(0), std::invalid_argument);
}

TEST(Equioscillation, Examples) {
  const int samples = 4096;
  for (std::size_t n = 1; n <= 8; ++n) {
    std::vector<double> v;
    for (int k = 0; k < samples; ++k) v.push_back(std::cos(static_cast<double>(n) * 2 * kPi * k / samples));
    EXPECT_EQ(equioscillation_order(v, 1e-4), n);
  }
  const std::vector<double> flat(512, 3.0);
  EXPECT_EQ(equioscillation_order(flat, 1e-9), 0U);
  std::vector<double> sparse;
  for (int k = 0; k < 64; ++k) sparse.push_back(std::cos(2 * 2 * kPi * k / 64.0));
  EXPECT_THROW(equioscillation_order(sparse, 1e-9), std::invalid_argument);
}

TEST(Equioscillation, ReciprocalGAtExtremalConfig) {
  // 1/G - 2/n^2 at the roots of unity equals -2 cos(nt)/n^2.
  for (std::size_t n = 2; n <= 8; ++n) {
    const CircleConfig cfg = CircleConfig::roots_of_unity(n);
    const double nn = static_cast<double>(n);
    std::vector<double> v;
    const int samples = 4096;
    for (int k = 0; k < samples; ++k) {
      const double t = 2 * kPi * (k + 0.5) / samples;
      v.push_back(1.0 / g_sum(cfg, t) - 2.0 / (nn * nn));
    }
    EXPECT_EQ(equioscillation_order(v, 1e-6), n);
  }
}
