#ifndef POLYCHAIN_VERIFY_HPP
#define POLYCHAIN_VERIFY_HPP

// Self-checks over the proved identities and bounds, with seeded random
// instances.  Each suite reports its worst residual against a tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "polychain/chain.hpp"
#include "polychain/circle.hpp"
#include "polychain/geometry.hpp"
#include "polychain/polynomial.hpp"
#include "polychain/sampling.hpp"

namespace polychain {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool gate = true;  // false: reported only
  bool passed = true;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  double cosform_constant = 2.0;  // anything else must fail the cosform suite
};

namespace detail {

inline SuiteResult finish(SuiteResult r) {
  r.passed = !r.gate || r.max_residual <= r.tolerance;
  return r;
}

inline ComplexPolynomial random_poly_from_roots(std::mt19937_64& rng, std::size_t n, bool unimodular) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> rs;
  for (std::size_t k = 0; k < n; ++k) {
    const double radius = unimodular ? 1.0 : std::sqrt(u(rng));
    rs.push_back(std::polar(radius, kTwoPi * u(rng)));
  }
  const Complex lead = std::polar(0.5 + u(rng), kTwoPi * u(rng));
  return ComplexPolynomial::from_roots(rs, lead);
}

inline double worst_modulus_error(const std::vector<Complex>& rs) {
  double worst = 0.0;
  for (const Complex& r : rs) worst = std::max(worst, std::abs(std::abs(r) - 1.0));
  return worst;
}

}  // namespace detail

inline SuiteResult verify_cosform(const VerifyOptions& opt = {}) {
  std::mt19937_64 rng(mix_seed(opt.seed, 1));
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  SuiteResult r{"cosform", 0, 0.0, 1e-8};
  for (std::size_t n = 1; n <= 64; ++n) {
    const double nn = static_cast<double>(n);
    for (int i = 0; i < 100; ++i) {
      const double t = u(rng);
      const double h = std::sin(0.5 * nn * t);
      const double rhs = nn * nn / (h * h);
      r.max_residual = std::max(r.max_residual, cosform_residual(n, t, opt.cosform_constant) / rhs);
      ++r.cases;
    }
  }
  return detail::finish(r);
}

inline SuiteResult verify_riesz() {
  SuiteResult r{"riesz", 0, 0.0, 1e-6};
  for (std::size_t n = 1; n <= 100; ++n) {
    const double nn = static_cast<double>(n);
    r.max_residual = std::max(r.max_residual, std::abs(riesz_node_sum(n) - nn * nn) / (nn * nn));
    ++r.cases;
  }
  return detail::finish(r);
}

/// Uniform tangent partitions with m = 2..200 points.
inline SuiteResult verify_affine_perimeter() {
  SuiteResult r{"affine_perimeter", 0, 0.0, 1e-10};
  const double expected = 2.0 * std::cbrt(0.5);
  for (std::size_t m = 2; m <= 200; ++m) {
    std::vector<double> params(m);
    for (std::size_t i = 0; i < m; ++i) params[i] = static_cast<double>(i) / static_cast<double>(m - 1);
    r.max_residual = std::max(r.max_residual, std::abs(affine_perimeter(params) - expected));
    ++r.cases;
  }
  return detail::finish(r);
}

/// Residual is the largest violation of deficiency >= (a - b)^2 / 3.
inline SuiteResult verify_mobius(const VerifyOptions& opt = {}, std::size_t trials = 1000000) {
  std::mt19937_64 rng(mix_seed(opt.seed, 2));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SuiteResult r{"mobius", 0, 0.0, 1e-12};
  for (std::size_t i = 0; i < trials; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    const double c = u(rng);
    const double slack = mobius_deficiency(a, b, c) - (a - b) * (a - b) / 3.0;
    r.max_residual = std::max(r.max_residual, -slack);
    ++r.cases;
  }
  return detail::finish(r);
}

inline SuiteResult verify_derivative_shift(const VerifyOptions& opt = {}, std::size_t trials = 1000) {
  std::mt19937_64 rng(mix_seed(opt.seed, 3));
  std::uniform_int_distribution<std::size_t> deg(1, 12);
  SuiteResult r{"derivative_shift_roots", 0, 0.0, 1e-8};
  for (std::size_t i = 0; i < trials; ++i) {
    const ComplexPolynomial g = detail::random_poly_from_roots(rng, deg(rng), true);
    r.max_residual = std::max(r.max_residual, detail::worst_modulus_error(derivative_shift_roots(g)));
    ++r.cases;
  }
  return detail::finish(r);
}

inline SuiteResult verify_sum_with_unimodular(const VerifyOptions& opt = {}, std::size_t trials = 1000) {
  std::mt19937_64 rng(mix_seed(opt.seed, 4));
  std::uniform_int_distribution<std::size_t> deg(1, 12);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  SuiteResult r{"sum_with_unimodular", 0, 0.0, 1e-8};
  for (std::size_t i = 0; i < trials; ++i) {
    const ComplexPolynomial g = detail::random_poly_from_roots(rng, deg(rng), false);
    const Complex gamma = std::polar(1.0, u(rng));
    r.max_residual = std::max(r.max_residual, detail::worst_modulus_error(sum_with_unimodular(g, gamma)));
    ++r.cases;
  }
  return detail::finish(r);
}

/// M(z) <= n^2/4 on random configurations.
inline SuiteResult verify_planar_bound(const VerifyOptions& opt = {}, std::size_t trials = 10000) {
  std::mt19937_64 rng(mix_seed(opt.seed, 5));
  std::uniform_int_distribution<std::size_t> size(1, 16);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  SuiteResult r{"planar_bound", 0, 0.0, 1e-9};
  for (std::size_t i = 0; i < trials; ++i) {
    std::vector<double> a(size(rng));
    for (double& t : a) t = u(rng);
    const CircleConfig cfg(a);
    const double cap = 0.25 * static_cast<double>(cfg.size() * cfg.size());
    r.max_residual = std::max(r.max_residual, minimize_on_circle(cfg).M - cap);
    ++r.cases;
  }
  return detail::finish(r);
}

/// M = n^2/4 at rotated roots of unity.
inline SuiteResult verify_planar_equality(const VerifyOptions& opt = {}) {
  std::mt19937_64 rng(mix_seed(opt.seed, 9));
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  SuiteResult r{"planar_equality", 0, 0.0, 1e-8};
  for (std::size_t n = 1; n <= 16; ++n) {
    for (int k = 0; k < 8; ++k) {
      const CircleConfig cfg = CircleConfig::roots_of_unity(n, u(rng));
      r.max_residual = std::max(r.max_residual, std::abs(minimize_on_circle(cfg).M - 0.25 * static_cast<double>(n * n)));
      ++r.cases;
    }
  }
  return detail::finish(r);
}

inline SuiteResult verify_phi_fixed_points(const VerifyOptions& opt = {}) {
  std::mt19937_64 rng(mix_seed(opt.seed, 6));
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  SuiteResult r{"phi_fixed_points", 0, 0.0, 1e-8};
  for (std::size_t n = 1; n <= 16; ++n) {
    for (int k = 0; k < 8; ++k) {
      const CircleConfig cfg = CircleConfig::roots_of_unity(n, u(rng));
      r.max_residual = std::max(r.max_residual, config_distance(phi_iterate(cfg), cfg));
      ++r.cases;
    }
  }
  return detail::finish(r);
}

/// Reported only: fraction of random configurations where M decreases
/// under one Phi step (beyond 1e-9 relative).
inline SuiteResult verify_phi_monotone(const VerifyOptions& opt = {}, std::size_t trials = 1000) {
  std::mt19937_64 rng(mix_seed(opt.seed, 7));
  std::uniform_int_distribution<std::size_t> size(2, 12);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  SuiteResult r{"phi_monotone", 0, 0.0, 0.01};
  r.gate = false;
  std::size_t decreases = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    std::vector<double> a(size(rng));
    for (double& t : a) t = u(rng);
    const CircleConfig cfg(a);
    const double before = minimize_on_circle(cfg).M;
    const double after = minimize_on_circle(phi_iterate(cfg)).M;
    if (after < before * (1.0 - 1e-9)) ++decreases;
    ++r.cases;
  }
  r.max_residual = static_cast<double>(decreases) / static_cast<double>(trials);
  return detail::finish(r);
}

/// Exact DP length against exhaustive search at n = 12.
inline SuiteResult verify_chain_oracle(const VerifyOptions& opt = {}, std::size_t trials = 1000) {
  SuiteResult r{"chain_oracle", 0, 0.0, 0.0};
  for (std::size_t i = 0; i < trials; ++i) {
    const PointSample s = sample_uniform(12, mix_seed(mix_seed(opt.seed, 8), i));
    const double dp = static_cast<double>(longest_chain_exact(s).length());
    const double bf = static_cast<double>(brute_force_chain(s).length());
    r.max_residual = std::max(r.max_residual, std::abs(dp - bf));
    ++r.cases;
  }
  return detail::finish(r);
}

inline std::vector<SuiteResult> run_verify(const VerifyOptions& opt = {}) {
  return {verify_cosform(opt),
          verify_riesz(),
          verify_affine_perimeter(),
          verify_mobius(opt),
          verify_derivative_shift(opt),
          verify_sum_with_unimodular(opt),
          verify_planar_bound(opt),
          verify_planar_equality(opt),
          verify_phi_fixed_points(opt),
          verify_chain_oracle(opt),
          verify_phi_monotone(opt)};
}

}  // namespace polychain

#endif  // POLYCHAIN_VERIFY_HPP
