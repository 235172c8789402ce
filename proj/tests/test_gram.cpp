#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "polychain/gram.hpp"
#include "polychain/lp.hpp"

using namespace polychain;

namespace {

UnitVectorSystem random_system(std::mt19937_64& rng, Eigen::Index d, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd u(d, n);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) u(i, j) = nd(rng);
  }
  return UnitVectorSystem::normalized(u);
}

std::vector<double> random_admissible_v(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  double mean = 0.0;
  for (double& x : v) {
    x = nd(rng);
    mean += x / static_cast<double>(n);
  }
  double sq = 0.0;
  for (double& x : v) {
    x -= mean;
    sq += x * x;
  }
  const double scale = std::sqrt(static_cast<double>(n * (n - 1)) / sq);
  for (double& x : v) x *= scale;
  return v;
}

double fv_grid(const std::vector<double>& v, int steps) {
  double best = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double phi = std::numbers::pi * k / steps;
    double p = 1.0;
    for (double x : v) p *= x * std::sin(phi) + std::cos(phi);
    best = std::max(best, std::abs(p));
  }
  return best;
}

}  // namespace

TEST(UnitVectorSystem, RejectsNonUnitColumns) {
  Eigen::MatrixXd u(2, 2);
  u << 1.0, 0.0, 0.0, 1.0 + 1e-9;
  EXPECT_THROW(UnitVectorSystem{u}, std::invalid_argument);
  EXPECT_THROW(UnitVectorSystem::normalized(Eigen::MatrixXd::Zero(2, 1)), std::invalid_argument);
  EXPECT_NO_THROW(UnitVectorSystem::normalized(u));
}

TEST(Gram, Examples) {
  EXPECT_TRUE(gram(UnitVectorSystem::orthonormal(4)).M.isIdentity(0.0));
  const double theta = 0.7;
  const GramData pair = gram(UnitVectorSystem::planar({0.0, theta}));
  EXPECT_DOUBLE_EQ(pair.M(0, 1), std::cos(theta));
  EXPECT_DOUBLE_EQ(pair.M(1, 0), std::cos(theta));
  EXPECT_EQ(pair.rank, 2);
  const GramData dup = gram(UnitVectorSystem::planar({0.3, 0.3}));
  EXPECT_EQ(dup.rank, 1);
  ASSERT_EQ(dup.kernel.cols(), 1);
  EXPECT_NEAR(std::abs(dup.kernel(0, 0)), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(dup.kernel(0, 0) + dup.kernel(1, 0), 0.0, 1e-12);
}

TEST(Gram, PsdWithUnitDiagonal) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const GramData g = gram(random_system(rng, 1 + trial % 4, 2 + trial % 6));
    EXPECT_GE(g.eigenvalues.minCoeff(), -1e-10);
    for (Eigen::Index i = 0; i < g.size(); ++i) EXPECT_NEAR(g.M(i, i), 1.0, 1e-12);
    EXPECT_LE(g.rank, std::min<Eigen::Index>(1 + trial % 4, g.size()));
  }
  EXPECT_THROW(GramData::from_matrix(Eigen::Matrix2d{{1.0, 2.0}, {2.0, 1.0}}), std::invalid_argument);
}

TEST(ConeLP, SmallCases) {
  // Columns of A span the cone; the question is whether A w > 0 is possible.
  EXPECT_TRUE(cone_meets_positive_orthant(Eigen::MatrixXd::Identity(3, 3)));
  Eigen::MatrixXd a(2, 1);
  a << 1.0, -1.0;
  EXPECT_FALSE(cone_meets_positive_orthant(a));
  a << 2.0, 0.5;
  EXPECT_TRUE(cone_meets_positive_orthant(a));
  a << 1.0, 0.0;
  EXPECT_FALSE(cone_meets_positive_orthant(a));
  EXPECT_FALSE(cone_meets_positive_orthant(Eigen::MatrixXd(3, 0)));
  Eigen::MatrixXd b(3, 2);
  b << 1.0, 0.0, -1.0, 1.0, 0.0, -1.0;  // w = (2, 1) gives (2, -1, -1)
  EXPECT_FALSE(cone_meets_positive_orthant(b));
  b << 1.0, 0.0, -1.0, 2.0, 0.0, 1.0;  // w = (1, 1) gives (1, 1, 1)
  EXPECT_TRUE(cone_meets_positive_orthant(b));
}

TEST(ConeLP, ClosedOrthantNeedsNonzeroVector) {
  Eigen::MatrixXd a(2, 1);
  a << 1.0, 0.0;
  EXPECT_TRUE(cone_meets_nonnegative_orthant(a));
  a << 1.0, -1e-3;
  EXPECT_FALSE(cone_meets_nonnegative_orthant(a));
  EXPECT_FALSE(cone_meets_nonnegative_orthant(Eigen::MatrixXd::Zero(2, 1)));
  EXPECT_FALSE(cone_meets_nonnegative_orthant(Eigen::MatrixXd(3, 0)));
  Eigen::MatrixXd b(3, 2);
  b << 1.0, 0.0, -1.0, 1.0, 0.0, -1.0;  // w = (1, 1) gives (1, 0, -1); none works
  EXPECT_FALSE(cone_meets_nonnegative_orthant(b));
  b << 1.0, 0.0, -1.0, 1.0, 0.0, 0.0;  // w = (1, 1) gives (1, 0, 0)
  EXPECT_TRUE(cone_meets_nonnegative_orthant(b));
}

TEST(InverseEigenvector, DirectSumWithKernelBlockIsAbsent) {
  // The kernel (0, 0, k) lies on the boundary of the all-plus quadrant; the
  // decoupled second block has no solution there, so neither does the sum.
  const auto p = UnitVectorSystem::planar({0.0, 1.0});
  const auto q = UnitVectorSystem::planar({0.0, 2.0, 4.0});
  const GramData gq = gram(q);
  const GramData g = gram(UnitVectorSystem::direct_sum(p, q));
  for (std::uint64_t k = 0; k < 32; ++k) {
    const Eigen::VectorXd s = quadrant_signs(5, k);
    const bool block = inverse_eigenvector_in_quadrant(gq, s.tail(3)).present;
    const auto sol = inverse_eigenvector_in_quadrant(g, s);
    EXPECT_EQ(sol.present, block) << k;
    if (sol.present) {
      EXPECT_LT(inverse_residual(g.M, sol.alpha), 1e-9);
    }
  }
}

TEST(ConeLP, OneDimensionalKernelSignPattern) {
  // Three planar vectors have a one-dimensional kernel k; exactly the two
  // quadrants sign(k) and -sign(k) meet it.
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const UnitVectorSystem sys = random_system(rng, 2, 3);
    const GramData g = gram(sys);
    ASSERT_EQ(g.kernel.cols(), 1);
    const Eigen::VectorXd k = g.kernel.col(0);
    for (std::uint64_t q = 0; q < 8; ++q) {
      const Eigen::VectorXd s = quadrant_signs(3, q);
      const bool same = (s.array() * k.array() > 0).all();
      const bool opposite = (s.array() * k.array() < 0).all();
      EXPECT_EQ(quadrant_meets_kernel(g, s), same || opposite) << trial << " " << q;
    }
  }
}

TEST(InverseEigenvector, IdentityGivesSigns) {
  const GramData g = gram(UnitVectorSystem::orthonormal(3));
  const auto sols = all_inverse_eigenvectors(g);
  ASSERT_EQ(sols.size(), 8U);
  for (const auto& s : sols) {
    ASSERT_TRUE(s.present);
    EXPECT_LT((s.alpha - s.signs).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(s.norm_sq, 3.0, 1e-12);
    EXPECT_NEAR(std::abs(s.product), 1.0, 1e-12);
  }
}

TEST(InverseEigenvector, ClosedFormTwoByTwoFamily) {
  for (int k = 0; k <= 9; ++k) {
    const double c = 0.1 * k;
    const GramData g = GramData::from_matrix(Eigen::Matrix2d{{1.0, c}, {c, 1.0}});
    const QuadrantSolution s = inverse_eigenvector_in_quadrant(g, Eigen::Vector2d(1.0, 1.0));
    ASSERT_TRUE(s.present);
    const double a = 1.0 / std::sqrt(1.0 + c);
    EXPECT_NEAR(s.alpha(0), a, 1e-9) << c;
    EXPECT_NEAR(s.alpha(1), a, 1e-9) << c;
    EXPECT_NEAR(s.norm_sq, 2.0 / (1.0 + c), 1e-9);
  }
}

TEST(InverseEigenvector, DuplicatedVectorHasNoMixedQuadrant) {
  const GramData g = gram(UnitVectorSystem::planar({1.1, 1.1}));
  const auto sols = all_inverse_eigenvectors(g);
  ASSERT_EQ(sols.size(), 4U);
  for (const auto& s : sols) {
    const bool mixed = s.signs(0) != s.signs(1);
    EXPECT_EQ(s.present, !mixed);
    if (s.present) {
      // M = all-ones: a1 + a2 = 1/a1 = 1/a2, so a = 1/sqrt(2).
      EXPECT_NEAR(std::abs(s.alpha(0)), std::sqrt(0.5), 1e-9);
    }
  }
}

TEST(InverseEigenvector, RandomNonsingularResiduals) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const GramData g = gram(random_system(rng, 4, 4));
    const auto sols = all_inverse_eigenvectors(g);
    ASSERT_EQ(sols.size(), 16U);
    for (std::size_t q = 0; q < sols.size(); ++q) {
      const auto& s = sols[q];
      ASSERT_TRUE(s.present);
      EXPECT_LT(inverse_residual(g.M, s.alpha), 1e-9);
      EXPECT_NEAR(s.alpha.dot(g.M * s.alpha), 4.0, 1e-9);
      EXPECT_TRUE((s.alpha.array() * s.signs.array() > 0).all());
      // The opposite quadrant holds -alpha.
      const auto& o = sols[q ^ 15U];
      EXPECT_LT((o.alpha + s.alpha).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(InverseEigenvector, CountMatchesKernelQuadrants) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const GramData g = gram(random_system(rng, 2 + trial % 2, 5));
    std::size_t present = 0, meets = 0;
    for (const auto& s : all_inverse_eigenvectors(g)) {
      present += s.present ? 1 : 0;
      if (s.present) {
        EXPECT_LT(inverse_residual(g.M, s.alpha), 1e-9);
        EXPECT_NEAR(s.alpha.dot(g.M * s.alpha), 5.0, 1e-9);
      }
    }
    for (std::uint64_t q = 0; q < 32; ++q) meets += quadrant_meets_kernel(g, quadrant_signs(5, q)) ? 1 : 0;
    EXPECT_EQ(present + meets, 32U);
    EXPECT_GT(meets, 0U);
  }
}

TEST(InverseEigenvector, IndependentStartsAgree) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const GramData g = gram(random_system(rng, 3, 5));
    for (std::uint64_t q = 0; q < 32; ++q) {
      const Eigen::VectorXd s = quadrant_signs(5, q);
      Eigen::VectorXd a(5), b(5);
      for (Eigen::Index i = 0; i < 5; ++i) {
        a(i) = s(i) * u(rng);
        b(i) = s(i) * u(rng);
      }
      const auto ra = inverse_eigenvector_in_quadrant(g, s, {}, &a);
      const auto rb = inverse_eigenvector_in_quadrant(g, s, {}, &b);
      ASSERT_EQ(ra.present, rb.present);
      if (ra.present) {
        EXPECT_LT((ra.alpha - rb.alpha).cwiseAbs().maxCoeff(), 1e-7);
      }
    }
  }
}

TEST(InverseEigenvector, BadSignsThrow) {
  const GramData g = gram(UnitVectorSystem::orthonormal(2));
  EXPECT_THROW(inverse_eigenvector_in_quadrant(g, Eigen::Vector3d(1, 1, 1)), std::invalid_argument);
  EXPECT_THROW(inverse_eigenvector_in_quadrant(g, Eigen::Vector2d(1, 0)), std::invalid_argument);
  EXPECT_THROW(all_inverse_eigenvectors(gram(UnitVectorSystem::orthonormal(17))), std::invalid_argument);
}

TEST(InverseEigenvector, IterationCapReportsResidual) {
  std::mt19937_64 rng(6);
  const GramData g = gram(random_system(rng, 4, 4));
  InverseSolverOptions opt;
  opt.max_iterations = 0;
  try {
    inverse_eigenvector_in_quadrant(g, Eigen::Vector4d(1, -1, 1, 1), opt);
    FAIL() << "expected a convergence error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(ConjectureScan, OrthonormalIsExtremal) {
  const ConjectureReport r = conjecture_scan(UnitVectorSystem::orthonormal(4));
  EXPECT_EQ(r.present, 16U);
  EXPECT_NEAR(r.min_norm_sq, 4.0, 1e-12);
  EXPECT_NEAR(r.min_abs_product, 1.0, 1e-12);
  EXPECT_FALSE(r.ball_violation);
  EXPECT_FALSE(r.hyperbola_violation);
  EXPECT_NEAR(r.v_norm_sq, 4.0, 1e-9);
  EXPECT_LT(r.v_residual, 1e-8);
}

TEST(ConjectureScan, PlanarPairAtSixtyDegrees) {
  const ConjectureReport r = conjecture_scan(UnitVectorSystem::planar({0.0, std::numbers::pi / 3}));
  EXPECT_NEAR(r.min_norm_sq, 4.0 / 3.0, 1e-9);
  EXPECT_FALSE(r.ball_violation);
}

TEST(ConjectureScan, DirectSumAddsMinima) {
  const auto a = UnitVectorSystem::orthonormal(2);
  const auto b = UnitVectorSystem::orthonormal(3);
  EXPECT_NEAR(conjecture_scan(UnitVectorSystem::direct_sum(a, b)).min_norm_sq, 5.0, 1e-8);
  // The Gram matrix is block diagonal, so the equations decouple.
  const auto p = UnitVectorSystem::planar({0.0, std::numbers::pi / 3});
  const auto q = UnitVectorSystem::planar({0.0, 2.0, 4.0});
  const double sum = conjecture_scan(p).min_norm_sq + conjecture_scan(q).min_norm_sq;
  EXPECT_NEAR(conjecture_scan(UnitVectorSystem::direct_sum(p, q)).min_norm_sq, sum, 1e-8);
}

TEST(ConjectureScan, WitnessIsStationary) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const UnitVectorSystem sys = random_system(rng, 3, 6);
    const ConjectureReport r = conjecture_scan(sys);
    EXPECT_NEAR(r.v_norm_sq, 6.0, 1e-9);
    EXPECT_LT(r.v_residual, 1e-8);
    EXPECT_LE(r.min_abs_product, r.max_abs_product);
  }
  EXPECT_THROW(conjecture_scan(UnitVectorSystem::orthonormal(13)), std::invalid_argument);
}

TEST(StationaryResidual, Examples) {
  const auto sys = UnitVectorSystem::orthonormal(3);
  const Eigen::Vector3d v(1.0, -1.0, 1.0);
  EXPECT_NEAR(stationary_residual(sys, v), 0.0, 1e-15);
  const Eigen::Vector3d w = Eigen::Vector3d(1.1, -1.0, 0.9).normalized() * std::sqrt(3.0);
  EXPECT_GT(stationary_residual(sys, w), 1e-3);
  EXPECT_THROW(stationary_residual(sys, Eigen::Vector3d(std::sqrt(3.0), 0.0, 0.0)), std::domain_error);
  EXPECT_THROW(stationary_residual(sys, Eigen::Vector3d(1.0, 1.0, 0.0)), std::invalid_argument);
}

TEST(SphereProduct, Examples) {
  for (Eigen::Index n = 1; n <= 6; ++n) {
    const SphereProductResult r = product_max_on_sphere(UnitVectorSystem::orthonormal(n), 16);
    EXPECT_NEAR(r.value, std::pow(static_cast<double>(n), -0.5 * static_cast<double>(n)), 1e-12) << n;
    EXPECT_FALSE(r.below_bound);
  }
  const auto one = UnitVectorSystem::planar({0.4});
  EXPECT_NEAR(product_max_on_sphere(one, 1).value, 1.0, 1e-12);
  EXPECT_THROW(product_max_on_sphere(one, 0), std::invalid_argument);
}

TEST(SphereProduct, EquallySpacedPlanarSystem) {
  // prod_k |sin(phi - k pi/n)| = |sin(n phi)| / 2^(n-1).
  for (int n = 2; n <= 8; ++n) {
    std::vector<double> ang;
    for (int k = 0; k < n; ++k) ang.push_back(std::numbers::pi * k / n);
    const double got = product_max_on_sphere(UnitVectorSystem::planar(ang), 32).value;
    EXPECT_NEAR(got, std::pow(2.0, -(n - 1)), 1e-12) << n;
  }
}

TEST(SphereProduct, AtLeastDenseGridInPlane) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const UnitVectorSystem sys = random_system(rng, 2, 2 + trial % 6);
    double grid = 0.0;
    for (int k = 0; k < 20000; ++k) {
      const double phi = std::numbers::pi * k / 20000.0;
      const Eigen::Vector2d v(std::cos(phi), std::sin(phi));
      grid = std::max(grid, (sys.vectors().transpose() * v).cwiseAbs().prod());
    }
    const double got = product_max_on_sphere(sys, 32).value;
    EXPECT_GE(got, grid * (1.0 - 1e-12));
    EXPECT_LE(got, grid * 1.01);
  }
}

TEST(FvMax, Examples) {
  EXPECT_NEAR(fv_max({1.0, -1.0}), 1.0, 1e-12);
  EXPECT_NEAR(fv_max(fv_extremal(3)), 1.0, 1e-12);
  EXPECT_EQ(fv_max({0.0}), 1.0);
  EXPECT_THROW(fv_max({1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(fv_max({2.0, -2.0}), std::invalid_argument);
  EXPECT_THROW(fv_max({}), std::invalid_argument);
}

TEST(FvMax, ExtremalVectorsEquioscillate) {
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto v = fv_extremal(n);
    EXPECT_NEAR(fv_max(v), 1.0, 1e-9) << n;
  }
}

TEST(FvMax, RandomAdmissibleAtLeastOneAndMatchesGrid) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const auto v = random_admissible_v(rng, 2 + trial % 9);
    const double f = fv_max(v);
    EXPECT_GE(f, 1.0 - 1e-9);
    const double grid = fv_grid(v, 20000);
    EXPECT_GE(f, grid * (1.0 - 1e-12));
    EXPECT_LE(f, grid * 1.01);
  }
}

TEST(GeneralizedInverse, Examples) {
  const GeneralizedInverse id = generalized_inverse(gram(UnitVectorSystem::orthonormal(3)));
  EXPECT_TRUE(id.finite.isIdentity(1e-15));
  EXPECT_TRUE(id.inv_eigenvalues.allFinite());
  const GeneralizedInverse d = generalized_inverse(GramData::from_matrix(Eigen::Matrix2d{{2.0, 0.0}, {0.0, 0.0}}));
  const Eigen::MatrixXd m = d.with_infinities();
  EXPECT_DOUBLE_EQ(m(0, 0), 0.5);
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_TRUE(std::isinf(m(1, 1)));
  EXPECT_EQ(std::count_if(d.inv_eigenvalues.data(), d.inv_eigenvalues.data() + 2,
                          [](double x) { return std::isinf(x); }),
            1);
}

TEST(GeneralizedInverse, InvertsOnImage) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 30; ++trial) {
    const GramData g = gram(random_system(rng, 3, 5));
    const GeneralizedInverse gi = generalized_inverse(g);
    Eigen::VectorXd y(5);
    for (Eigen::Index i = 0; i < 5; ++i) y(i) = nd(rng);
    const Eigen::VectorXd x = g.M * y;  // in the image
    EXPECT_LT((gi.finite * g.M * x - x).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(GeneralizedInverse, InverseEigenvectorBijection) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const GramData g = gram(random_system(rng, 3, 3));
    const GeneralizedInverse gi = generalized_inverse(g);
    const GramData ginv = GramData::from_matrix(gi.finite);
    for (const auto& s : all_inverse_eigenvectors(g)) {
      ASSERT_TRUE(s.present);
      const Eigen::VectorXd beta = s.alpha.cwiseInverse();
      // M^-1 beta = alpha = beta^-1.
      EXPECT_LT(inverse_residual(gi.finite, beta), 1e-8);
      const auto t = inverse_eigenvector_in_quadrant(ginv, s.signs);
      ASSERT_TRUE(t.present);
      EXPECT_LT((t.alpha - beta).cwiseAbs().maxCoeff(), 1e-7);
    }
  }
}
