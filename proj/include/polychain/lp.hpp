#ifndef POLYCHAIN_LP_HPP
#define POLYCHAIN_LP_HPP

// Dense phase-one simplex for small feasibility questions.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace polychain {

/// Whether {y >= 0 : B y = b} is nonempty, up to `tol` in the phase-one
/// objective.  Artificial variables, Bland's rule.
inline bool phase_one_feasible(const Eigen::MatrixXd& B, const Eigen::VectorXd& b, double tol = 1e-9) {
  const auto m = static_cast<std::size_t>(B.rows());
  const auto k = static_cast<std::size_t>(B.cols());
  if (m == 0) return true;
  const std::size_t cols = k + m;  // y, then artificials
  // Tableau rows: constraints, then the objective row (reduced costs).
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b(static_cast<Eigen::Index>(i)) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < k; ++j) t[i][j] = sign * B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    t[i][k + i] = 1.0;
    t[i][cols] = sign * b(static_cast<Eigen::Index>(i));
    basis[i] = k + i;
  }
  // Objective sum of artificials, expressed in the nonbasic variables.
  for (std::size_t j = 0; j <= cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += t[i][j];
    t[m][j] = (j >= k && j < cols) ? 0.0 : -s;
  }
  constexpr double kEps = 1e-12;
  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (t[m][j] < -kEps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > kEps) {
        const double ratio = t[i][cols] / t[i][enter];
        if (leave == m || ratio < best - kEps || (std::abs(ratio - best) <= kEps && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur in phase one
    const double piv = t[leave][enter];
    for (double& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return -t[m][cols] <= tol;
}

/// Whether some w satisfies A w > 0 componentwise (w free).  By scaling this
/// is A w >= 1, i.e. A w+ - A w- - s = 1 with w+, w-, s >= 0.
inline bool cone_meets_positive_orthant(const Eigen::MatrixXd& A, double tol = 1e-9) {
  const Eigen::Index m = A.rows();
  const Eigen::Index k = A.cols();
  if (m == 0) return true;
  if (k == 0) return false;
  Eigen::MatrixXd B(m, 2 * k + m);
  B << A, -A, -Eigen::MatrixXd::Identity(m, m);
  return phase_one_feasible(B, Eigen::VectorXd::Ones(m), tol);
}

/// Whether some w with A w != 0 satisfies A w >= 0 componentwise (w free).
/// Normalized by sum(A w) = 1.
inline bool cone_meets_nonnegative_orthant(const Eigen::MatrixXd& A, double tol = 1e-9) {
  const Eigen::Index m = A.rows();
  const Eigen::Index k = A.cols();
  if (m == 0 || k == 0) return false;
  const Eigen::RowVectorXd colsum = A.colwise().sum();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, 2 * k + m);
  B.topRows(m) << A, -A, -Eigen::MatrixXd::Identity(m, m);
  B.block(m, 0, 1, k) = colsum;
  B.block(m, k, 1, k) = -colsum;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  b(m) = 1.0;
  return phase_one_feasible(B, b, tol);
}

}  // namespace polychain

#endif  // POLYCHAIN_LP_HPP
