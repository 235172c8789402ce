#ifndef POLYCHAIN_POLYNOMIAL_HPP
#define POLYCHAIN_POLYNOMIAL_HPP

// Complex polynomials with structural degree, reciprocals, and root finding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace polychain {

using Complex = std::complex<double>;

/// a_0 + a_1 z + ... + a_n z^n.  The degree is the index of the last stored
/// coefficient, even when that coefficient is zero; trailing zeros are never
/// trimmed implicitly.
class ComplexPolynomial {
 public:
  ComplexPolynomial() : coeffs_{Complex{0.0}} {}
  explicit ComplexPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
  }

  /// lead * prod (z - r).
  static ComplexPolynomial from_roots(std::span<const Complex> roots, Complex lead = 1.0) {
    std::vector<Complex> c{lead};
    for (const Complex& r : roots) {
      c.push_back(0.0);
      for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
      c[0] = -r * c[0];
    }
    return ComplexPolynomial(std::move(c));
  }

  static ComplexPolynomial monomial(std::size_t k, Complex coeff = 1.0) {
    std::vector<Complex> c(k + 1, 0.0);
    c[k] = coeff;
    return ComplexPolynomial(std::move(c));
  }

  std::size_t degree() const { return coeffs_.size() - 1; }

  /// Index of the last exactly nonzero coefficient (0 for the zero polynomial).
  std::size_t precise_degree() const {
    std::size_t d = degree();
    while (d > 0 && coeffs_[d] == Complex{0.0}) --d;
    return d;
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{0.0}; });
  }

  const std::vector<Complex>& coefficients() const { return coeffs_; }
  Complex operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Complex{0.0}; }
  Complex leading() const { return coeffs_.back(); }

  Complex operator()(Complex z) const {
    Complex acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i];
    return acc;
  }

  ComplexPolynomial derivative() const {
    if (degree() == 0) return ComplexPolynomial();
    std::vector<Complex> d(degree());
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return ComplexPolynomial(std::move(d));
  }

  /// Same polynomial padded or truncated (only zero coefficients) to `order`.
  ComplexPolynomial with_degree(std::size_t order) const {
    if (order < precise_degree()) throw std::invalid_argument("order below precise degree");
    std::vector<Complex> c(order + 1, 0.0);
    for (std::size_t i = 0; i <= std::min(order, degree()); ++i) c[i] = coeffs_[i];
    return ComplexPolynomial(std::move(c));
  }

  friend ComplexPolynomial operator+(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
    return ComplexPolynomial(std::move(c));
  }
  friend ComplexPolynomial operator-(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    return a + (-1.0) * b;
  }
  friend ComplexPolynomial operator*(Complex k, const ComplexPolynomial& a) {
    std::vector<Complex> c = a.coeffs_;
    for (Complex& x : c) x *= k;
    return ComplexPolynomial(std::move(c));
  }
  friend ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return ComplexPolynomial(std::move(c));
  }

 private:
  std::vector<Complex> coeffs_;
};

/// Reciprocal of the given order: conj(a_order) + conj(a_{order-1}) z + ...
/// + conj(a_0) z^order.  On |z| = 1 it satisfies g*(z) = z^order conj(g(z)).
inline ComplexPolynomial reciprocal(const ComplexPolynomial& g, std::size_t order) {
  if (order < g.precise_degree()) throw std::invalid_argument("reciprocal order below the degree");
  std::vector<Complex> c(order + 1, 0.0);
  for (std::size_t i = 0; i <= order; ++i) c[i] = std::conj(g[order - i]);
  return ComplexPolynomial(std::move(c));
}

inline ComplexPolynomial reciprocal(const ComplexPolynomial& g) { return reciprocal(g, g.degree()); }

struct RootOptions {
  double tolerance = 1e-13;
  int max_iterations = 500;
};

namespace detail {

inline std::vector<Complex> companion_roots(std::span<const Complex> c) {
  const std::size_t d = c.size() - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

/// Aberth steps from the given starting points; `log_deriv(x)` returns
/// p'(x)/p(x).  Returns false if not converged.
template <class LogDeriv>
bool aberth_steps(std::vector<Complex>& z, LogDeriv log_deriv, const RootOptions& opt) {
  const std::size_t d = z.size();
  for (int it = 0; it < opt.max_iterations; ++it) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const Complex ld = log_deriv(z[i]);
      if (!std::isfinite(ld.real()) || !std::isfinite(ld.imag())) continue;  // exact root
      Complex repulse = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) repulse += 1.0 / (z[i] - z[j]);
      }
      const Complex w = 1.0 / (ld - repulse);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
      z[i] -= w;
      worst = std::max(worst, std::abs(w) / std::max(1.0, std::abs(z[i])));
    }
    if (worst <= opt.tolerance) return true;
  }
  return false;
}

/// Aberth-Ehrlich simultaneous iteration; returns false if not converged.
inline bool aberth(std::span<const Complex> c, std::vector<Complex>& z, const RootOptions& opt) {
  const std::size_t d = c.size() - 1;
  // Start on a circle of radius (|a0/ad|)^(1/d), rotated off the axes.
  const double radius = std::pow(std::abs(c[0] / c[d]), 1.0 / static_cast<double>(d));
  z.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d) + 0.4;
    z[k] = std::polar(radius > 0.0 ? radius : 1.0, ang);
  }
  auto horner = [&](Complex x) {
    Complex p = c[d];
    Complex dp = 0.0;
    for (std::size_t k = d; k-- > 0;) {
      dp = dp * x + p;
      p = p * x + c[k];
    }
    return dp / p;
  };
  return aberth_steps(z, horner, opt);
}

}  // namespace detail

/// Roots of the polynomial at its precise degree, with multiplicity.
/// Exact zero coefficients at the bottom give exact roots at the origin.
inline std::vector<Complex> roots(const ComplexPolynomial& g, const RootOptions& opt = {}) {
  const std::size_t d = g.precise_degree();
  if (d == 0) return {};
  std::size_t low = 0;
  while (g[low] == Complex{0.0}) ++low;
  std::vector<Complex> out(low, Complex{0.0});
  std::vector<Complex> c;
  for (std::size_t i = low; i <= d; ++i) c.push_back(g[i]);
  if (c.size() == 1) return out;
  if (c.size() == 2) {
    out.push_back(-c[0] / c[1]);
    return out;
  }
  std::vector<Complex> z;
  if (!detail::aberth(c, z, opt)) z = detail::companion_roots(c);
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

}  // namespace polychain

#endif  // POLYCHAIN_POLYNOMIAL_HPP
