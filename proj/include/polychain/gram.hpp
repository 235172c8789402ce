#ifndef POLYCHAIN_GRAM_HPP
#define POLYCHAIN_GRAM_HPP

// Unit-vector systems, their Gram matrices and inverse eigenvectors
// (M a = a^{-1} coordinatewise), with scanners for the related extremal
// problems.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "polychain/lp.hpp"

namespace polychain {

/// n unit columns in R^d.
class UnitVectorSystem {
 public:
  explicit UnitVectorSystem(Eigen::MatrixXd vectors) : u_(std::move(vectors)) {
    if (u_.cols() < 1) throw std::invalid_argument("system needs at least one vector");
    for (Eigen::Index i = 0; i < u_.cols(); ++i) {
      if (std::abs(u_.col(i).norm() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "column " << i << " is not a unit vector (norm " << u_.col(i).norm() << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }

  /// Columns scaled to unit length first.
  static UnitVectorSystem normalized(Eigen::MatrixXd vectors) {
    for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
      const double nrm = vectors.col(i).norm();
      if (nrm == 0.0) throw std::invalid_argument("zero column");
      vectors.col(i) /= nrm;
    }
    return UnitVectorSystem(std::move(vectors));
  }

  static UnitVectorSystem orthonormal(Eigen::Index n) { return UnitVectorSystem(Eigen::MatrixXd::Identity(n, n)); }

  /// Unit vectors at the given angles in the plane.
  static UnitVectorSystem planar(const std::vector<double>& angles) {
    Eigen::MatrixXd u(2, static_cast<Eigen::Index>(angles.size()));
    for (std::size_t i = 0; i < angles.size(); ++i) {
      u(0, static_cast<Eigen::Index>(i)) = std::cos(angles[i]);
      u(1, static_cast<Eigen::Index>(i)) = std::sin(angles[i]);
    }
    return UnitVectorSystem(std::move(u));
  }

  /// Orthogonal direct sum: the two systems in complementary coordinates.
  static UnitVectorSystem direct_sum(const UnitVectorSystem& a, const UnitVectorSystem& b) {
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(a.dim() + b.dim(), a.count() + b.count());
    u.topLeftCorner(a.dim(), a.count()) = a.vectors();
    u.bottomRightCorner(b.dim(), b.count()) = b.vectors();
    return UnitVectorSystem(std::move(u));
  }

  const Eigen::MatrixXd& vectors() const { return u_; }
  Eigen::Index dim() const { return u_.rows(); }
  Eigen::Index count() const { return u_.cols(); }

 private:
  Eigen::MatrixXd u_;
};

struct GramData {
  Eigen::MatrixXd M;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns
  Eigen::Index rank = 0;
  Eigen::MatrixXd kernel;  // orthonormal columns spanning ker M

  Eigen::Index size() const { return M.rows(); }

  /// From a symmetric PSD matrix; eigenvalues up to 1e-9 of the largest
  /// count as zero.
  static GramData from_matrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1) throw std::invalid_argument("Gram matrix must be square and nonempty");
    if (!m.isApprox(m.transpose(), 1e-12) && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("Gram matrix must be symmetric");
    }
    GramData g;
    g.M = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.M);
    g.eigenvalues = es.eigenvalues();
    g.eigenvectors = es.eigenvectors();
    if (g.eigenvalues.minCoeff() < -1e-10) throw std::invalid_argument("Gram matrix is not positive semidefinite");
    const double cut = 1e-9 * std::max(g.eigenvalues.maxCoeff(), 0.0);
    Eigen::Index zero = 0;
    while (zero < g.M.rows() && g.eigenvalues(zero) <= cut) ++zero;
    g.rank = g.M.rows() - zero;
    g.kernel = g.eigenvectors.leftCols(zero);
    return g;
  }
};

inline GramData gram(const UnitVectorSystem& sys) {
  return GramData::from_matrix(sys.vectors().transpose() * sys.vectors());
}

/// Quadrant index q: coordinate i is negative iff bit i of q is set.
inline Eigen::VectorXd quadrant_signs(Eigen::Index n, std::uint64_t q) {
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = (q >> i) & 1U ? -1.0 : 1.0;
  return s;
}

/// Whether the closed quadrant with the given signs contains a nonzero kernel
/// vector.  Such a vector is a direction along which the solver's objective
/// is unbounded below, so no inverse eigenvector exists there.  For kernels
/// in general position this is the same as meeting the open quadrant.
inline bool quadrant_meets_kernel(const GramData& g, const Eigen::VectorXd& signs) {
  if (g.kernel.cols() == 0) return false;
  return cone_meets_nonnegative_orthant(signs.asDiagonal() * g.kernel);
}

struct QuadrantSolution {
  Eigen::VectorXd signs;
  bool present = false;
  Eigen::VectorXd alpha;
  double product = 0.0;
  double norm_sq = 0.0;
  double residual = 0.0;  // max |M a - 1/a|
  int iterations = 0;
};

inline double inverse_residual(const Eigen::MatrixXd& M, const Eigen::VectorXd& a) {
  return (M * a - a.cwiseInverse()).cwiseAbs().maxCoeff();
}

struct InverseSolverOptions {
  int max_iterations = 200;
  double tolerance = 1e-9;
};

/// The inverse eigenvector in a quadrant, found as the minimizer of the
/// strictly convex F(x) = x'Mx/2 - sum log(s_i x_i) over the open quadrant
/// (damped Newton).  Its stationary equation is M x = 1/x, which also gives
/// x'Mx = n; this is the same point as the maximizer of prod |x_i| on the
/// ellipsoid x'Mx = n.  F is unbounded below exactly when the closed quadrant
/// contains a nonzero kernel vector, in which case the solution is absent.
inline QuadrantSolution inverse_eigenvector_in_quadrant(const GramData& g, const Eigen::VectorXd& signs,
                                                        const InverseSolverOptions& opt = {},
                                                        const Eigen::VectorXd* start = nullptr) {
  const Eigen::Index n = g.size();
  if (signs.size() != n) throw std::invalid_argument("sign vector has the wrong length");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (signs(i) != 1.0 && signs(i) != -1.0) throw std::invalid_argument("signs must be +1 or -1");
  }
  QuadrantSolution sol;
  sol.signs = signs;
  if (quadrant_meets_kernel(g, signs)) return sol;

  const Eigen::MatrixXd& M = g.M;
  auto objective = [&](const Eigen::VectorXd& x) {
    double f = 0.5 * x.dot(M * x);
    for (Eigen::Index i = 0; i < n; ++i) f -= std::log(signs(i) * x(i));
    return f;
  };
  // Start: the sign vector scaled onto x'Mx = n.
  Eigen::VectorXd x = start ? *start : signs;
  const double q = x.dot(M * x);
  if (q > 0.0) x *= std::sqrt(static_cast<double>(n) / q);
  double fx = objective(x);
  double res = inverse_residual(M, x);
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Eigen::VectorXd grad = M * x - x.cwiseInverse();
    Eigen::MatrixXd H = M;
    H.diagonal() += x.cwiseInverse().cwiseAbs2();
    const Eigen::VectorXd step = H.ldlt().solve(-grad);
    // Stay inside the quadrant, then backtrack on F.
    double t = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double xi = x(i) + step(i);
      if (signs(i) * xi <= 0.0) t = std::min(t, 0.99 * x(i) / -step(i));
    }
    const double slope = grad.dot(step);
    Eigen::VectorXd trial = x + t * step;
    double ft = objective(trial);
    double trial_res = inverse_residual(M, trial);
    if (!(trial_res < res)) {
      // Backtrack on F; changes below its rounding level do not count.
      const double noise = 1e-14 * std::max(1.0, std::abs(fx));
      while (ft > fx + 1e-4 * t * slope + noise && t > 1e-16) {
        t *= 0.5;
        trial = x + t * step;
        ft = objective(trial);
      }
      trial_res = inverse_residual(M, trial);
      if (!(ft <= fx + noise) && trial_res >= res) break;  // no further progress in floating point
    }
    x = trial;
    fx = ft;
    res = trial_res;
    if (res < 1e-3 * opt.tolerance) break;
  }
  sol.iterations = it;
  sol.residual = res;
  if (!(res < opt.tolerance)) {
    std::ostringstream msg;
    msg << "inverse eigenvector did not converge: residual " << res << " after " << it << " iterations";
    throw std::runtime_error(msg.str());
  }
  sol.present = true;
  sol.alpha = x;
  sol.product = x.prod();
  sol.norm_sq = x.squaredNorm();
  return sol;
}

/// One entry per quadrant, in quadrant-index order.
inline std::vector<QuadrantSolution> all_inverse_eigenvectors(const GramData& g,
                                                              const InverseSolverOptions& opt = {}) {
  const Eigen::Index n = g.size();
  if (n > 16) throw std::invalid_argument("quadrant enumeration limited to n <= 16");
  std::vector<QuadrantSolution> out;
  const std::uint64_t count = std::uint64_t{1} << n;
  out.reserve(count);
  for (std::uint64_t q = 0; q < count; ++q) out.push_back(inverse_eigenvector_in_quadrant(g, quadrant_signs(n, q), opt));
  return out;
}

/// || v - sum u_i / <u_i, v> ||, zero exactly at the constrained critical
/// points of prod |<u_i, v>| on the sphere of radius sqrt(n).
inline double stationary_residual(const UnitVectorSystem& sys, const Eigen::VectorXd& v) {
  const double n = static_cast<double>(sys.count());
  if (v.size() != sys.dim()) throw std::invalid_argument("v has the wrong dimension");
  if (std::abs(v.squaredNorm() - n) > 1e-9 * std::max(1.0, n)) throw std::invalid_argument("|v|^2 must equal n");
  Eigen::VectorXd acc = v;
  for (Eigen::Index i = 0; i < sys.count(); ++i) {
    const double p = sys.vectors().col(i).dot(v);
    if (p == 0.0) throw std::domain_error("v is orthogonal to a system vector");
    acc -= sys.vectors().col(i) / p;
  }
  return acc.norm();
}

struct ConjectureReport {
  std::vector<QuadrantSolution> solutions;
  std::size_t present = 0;
  double min_norm_sq = std::numeric_limits<double>::infinity();
  double min_abs_product = std::numeric_limits<double>::infinity();
  double max_abs_product = 0.0;
  std::size_t ball_witness = 0;     // index of the solution with least sum a_i^2
  std::size_t product_witness = 0;  // index of the solution with least |prod a_i|
  Eigen::VectorXd v;                // sum a_i u_i for the ball witness
  double v_norm_sq = 0.0;
  double v_residual = 0.0;
  bool ball_violation = false;       // no solution with sum a_i^2 <= n
  bool hyperbola_violation = false;  // no solution with |prod a_i| <= 1
};

inline ConjectureReport conjecture_scan(const UnitVectorSystem& sys, const InverseSolverOptions& opt = {}) {
  if (sys.count() > 12) throw std::invalid_argument("conjecture scan limited to n <= 12");
  const GramData g = gram(sys);
  ConjectureReport rep;
  rep.solutions = all_inverse_eigenvectors(g, opt);
  for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
    const QuadrantSolution& s = rep.solutions[i];
    if (!s.present) continue;
    ++rep.present;
    if (s.norm_sq < rep.min_norm_sq) {
      rep.min_norm_sq = s.norm_sq;
      rep.ball_witness = i;
    }
    if (std::abs(s.product) < rep.min_abs_product) {
      rep.min_abs_product = std::abs(s.product);
      rep.product_witness = i;
    }
    rep.max_abs_product = std::max(rep.max_abs_product, std::abs(s.product));
  }
  if (rep.present == 0) throw std::runtime_error("no quadrant admits an inverse eigenvector");
  const double n = static_cast<double>(sys.count());
  rep.v = sys.vectors() * rep.solutions[rep.ball_witness].alpha;
  rep.v_norm_sq = rep.v.squaredNorm();
  rep.v_residual = stationary_residual(sys, rep.v);
  rep.ball_violation = rep.min_norm_sq > n + 1e-9;
  rep.hyperbola_violation = rep.min_abs_product > 1.0 + 1e-9;
  return rep;
}

struct SphereProductResult {
  double value = 0.0;  // max found of prod |<u_i, v>| over unit v
  Eigen::VectorXd v;
  double bound = 0.0;  // n^(-n/2)
  bool below_bound = false;
};

/// Multi-start ascent of log prod |<u_i, v>| over the unit sphere.  Each
/// start fixes the sign cell; within it the scale-invariant problem is the
/// coercive convex minimization of |v|^2/2 - sum log(s_i <u_i, v>), solved
/// by damped Newton, and the result is normalized.
inline SphereProductResult product_max_on_sphere(const UnitVectorSystem& sys, int restarts, std::uint64_t seed = 1) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const Eigen::MatrixXd& U = sys.vectors();
  const Eigen::Index d = sys.dim();
  const Eigen::Index n = sys.count();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SphereProductResult best;
  best.bound = std::pow(static_cast<double>(n), -0.5 * static_cast<double>(n));
  best.value = -1.0;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = normal(rng);
    Eigen::VectorXd p = U.transpose() * v;
    if ((p.array() == 0.0).any()) continue;
    const Eigen::VectorXd s = p.array().sign().matrix();
    auto objective = [&](const Eigen::VectorXd& w, const Eigen::VectorXd& pw) {
      return 0.5 * w.squaredNorm() - (s.array() * pw.array()).log().sum();
    };
    double f = objective(v, p);
    for (int it = 0; it < 200; ++it) {
      const Eigen::VectorXd inv = p.cwiseInverse();
      const Eigen::VectorXd grad = v - U * inv;
      if (grad.norm() < 1e-13 * std::max(1.0, v.norm())) break;
      Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
      H += U * inv.cwiseAbs2().asDiagonal() * U.transpose();
      const Eigen::VectorXd step = H.ldlt().solve(-grad);
      const Eigen::VectorXd dp = U.transpose() * step;
      double t = 1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (s(i) * (p(i) + dp(i)) <= 0.0) t = std::min(t, 0.99 * p(i) / -dp(i));
      }
      const double slope = grad.dot(step);
      Eigen::VectorXd trial = v + t * step;
      Eigen::VectorXd ptrial = p + t * dp;
      double ft = objective(trial, ptrial);
      const double noise = 1e-14 * std::max(1.0, std::abs(f));
      while (ft > f + 1e-4 * t * slope + noise && t > 1e-16) {
        t *= 0.5;
        trial = v + t * step;
        ptrial = p + t * dp;
        ft = objective(trial, ptrial);
      }
      if (!(ft <= f + noise)) break;
      v = trial;
      p = U.transpose() * v;
      f = ft;
    }
    const Eigen::VectorXd unit = v / v.norm();
    const double value = (U.transpose() * unit).cwiseAbs().prod();
    if (value > best.value) {
      best.value = value;
      best.v = unit;
    }
  }
  if (best.value < 0.0) throw std::runtime_error("every start was orthogonal to a system vector");
  best.below_bound = best.value < best.bound * (1.0 - 1e-9);
  return best;
}

/// max over phi of |prod (v_i sin phi + cos phi)| for sum v_i = 0 and
/// |v|^2 = n(n-1).  log|f| is concave between consecutive zeros, so each
/// arc maximum is found by bisection on its derivative.
inline double fv_max(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 1) throw std::invalid_argument("v must be nonempty");
  double sum = 0.0;
  double sq = 0.0;
  for (double x : v) {
    sum += x;
    sq += x * x;
  }
  const double nn = static_cast<double>(n);
  if (std::abs(sum) > 1e-10 * std::max(1.0, std::sqrt(sq))) throw std::invalid_argument("entries of v must sum to 0");
  if (std::abs(sq - nn * (nn - 1.0)) > 1e-9 * std::max(1.0, nn * (nn - 1.0))) {
    throw std::invalid_argument("|v|^2 must equal n(n-1)");
  }
  if (n == 1) return 1.0;  // v = 0: f = cos phi
  // Zeros mod pi of each factor.
  std::vector<double> zeros;
  for (double x : v) {
    double z = std::atan2(1.0, -x);
    if (z >= std::numbers::pi) z -= std::numbers::pi;
    zeros.push_back(z);
  }
  std::sort(zeros.begin(), zeros.end());
  auto log_abs = [&](double phi) {
    double s = 0.0;
    for (double x : v) s += std::log(std::abs(x * std::sin(phi) + std::cos(phi)));
    return s;
  };
  auto dlog = [&](double phi) {
    double s = 0.0;
    for (double x : v) s += (x * std::cos(phi) - std::sin(phi)) / (x * std::sin(phi) + std::cos(phi));
    return s;
  };
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    double lo = zeros[j];
    double hi = j + 1 < zeros.size() ? zeros[j + 1] : zeros[0] + std::numbers::pi;
    if (!(hi > lo)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dlog(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    best = std::max(best, log_abs(0.5 * (lo + hi)));
  }
  return std::exp(best);
}

/// The extremal vector v_k = cot((2k - 1) pi / (2n)).
inline std::vector<double> fv_extremal(std::size_t n) {
  std::vector<double> v;
  for (std::size_t k = 1; k <= n; ++k) {
    v.push_back(1.0 / std::tan((2.0 * static_cast<double>(k) - 1.0) * std::numbers::pi / (2.0 * static_cast<double>(n))));
  }
  if (n % 2 == 1) v[n / 2] = 0.0;  // cot(pi/2)
  return v;
}

/// Inverse on the image of M; kernel directions carry an infinite eigenvalue.
struct GeneralizedInverse {
  Eigen::MatrixXd finite;         // pseudo-inverse
  Eigen::VectorXd inv_eigenvalues;  // +inf on the kernel
  Eigen::MatrixXd eigenvectors;
  Eigen::MatrixXd kernel_projector;

  /// Matrix form with +inf wherever the kernel projector is nonzero.
  Eigen::MatrixXd with_infinities(double tol = 1e-12) const {
    Eigen::MatrixXd m = finite;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (std::abs(kernel_projector(i, j)) > tol) m(i, j) = std::numeric_limits<double>::infinity();
      }
    }
    return m;
  }
};

inline GeneralizedInverse generalized_inverse(const GramData& g) {
  GeneralizedInverse gi;
  const Eigen::Index n = g.size();
  const Eigen::Index zero = n - g.rank;
  gi.eigenvectors = g.eigenvectors;
  gi.inv_eigenvalues.resize(n);
  Eigen::VectorXd finite_diag = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i < zero) {
      gi.inv_eigenvalues(i) = std::numeric_limits<double>::infinity();
    } else {
      gi.inv_eigenvalues(i) = 1.0 / g.eigenvalues(i);
      finite_diag(i) = gi.inv_eigenvalues(i);
    }
  }
  gi.finite = g.eigenvectors * finite_diag.asDiagonal() * g.eigenvectors.transpose();
  gi.kernel_projector = g.kernel * g.kernel.transpose();
  return gi;
}

}  // namespace polychain

#endif  // POLYCHAIN_GRAM_HPP
