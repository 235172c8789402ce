#ifndef POLYCHAIN_CIRCLE_HPP
#define POLYCHAIN_CIRCLE_HPP

// Configurations on the unit circle: the sum G(t) = sum 1/|e^{it} - z_j|^2,
// its arc minima, reciprocal polynomials, the Fejer factor of the associated
// trigonometric polynomial and the Phi map built from it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "polychain/polynomial.hpp"

namespace polychain {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double wrap_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

struct CircleConfig {
  std::vector<double> angles;  // radians in [0, 2pi)

  CircleConfig() = default;
  explicit CircleConfig(std::vector<double> a) : angles(std::move(a)) {
    for (double& t : angles) {
      if (!std::isfinite(t)) throw std::invalid_argument("angle must be finite");
      t = wrap_angle(t);
    }
  }

  static CircleConfig from_turns(std::span<const double> turns) {
    std::vector<double> a;
    for (double u : turns) a.push_back(kTwoPi * u);
    return CircleConfig(std::move(a));
  }

  static CircleConfig roots_of_unity(std::size_t n, double rotation = 0.0) {
    std::vector<double> a;
    for (std::size_t j = 0; j < n; ++j) a.push_back(rotation + kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    return CircleConfig(std::move(a));
  }

  std::size_t size() const { return angles.size(); }
  Complex point(std::size_t j) const { return std::polar(1.0, angles[j]); }
  std::vector<Complex> points() const {
    std::vector<Complex> z;
    for (std::size_t j = 0; j < size(); ++j) z.push_back(point(j));
    return z;
  }
  std::vector<double> turns() const {
    std::vector<double> u;
    for (double t : angles) u.push_back(t / kTwoPi);
    return u;
  }
};

namespace detail {

/// |e^{it} - e^{is}|^2 = 4 sin^2((t - s)/2), accurate near coincidence.
inline double chord2(double t, double s) {
  const double h = std::sin(0.5 * (t - s));
  return 4.0 * h * h;
}

inline std::vector<double> sorted_angles(const CircleConfig& cfg) {
  std::vector<double> a = cfg.angles;
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace detail

inline double g_sum(const CircleConfig& cfg, double t) {
  double s = 0.0;
  for (double tj : cfg.angles) {
    const double d = detail::chord2(t, tj);
    if (d == 0.0) throw std::domain_error("g_sum evaluated at a configuration point");
    s += 1.0 / d;
  }
  return s;
}

/// dG/dt; increasing on every arc since each term is convex there.
inline double g_sum_derivative(const CircleConfig& cfg, double t) {
  double s = 0.0;
  for (double tj : cfg.angles) {
    const double h = 0.5 * (t - tj);
    const double sn = std::sin(h);
    s -= std::cos(h) / (4.0 * sn * sn * sn);
  }
  return s;
}

struct ArcMinimum {
  double start = 0.0;  // arc runs counter-clockwise from start to end
  double end = 0.0;
  double angle = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

struct ArcMinima {
  std::vector<ArcMinimum> arcs;
  double M = std::numeric_limits<double>::infinity();
  double argmin = 0.0;
};

namespace detail {

/// Sign change of a monotone function on (lo, hi) by bisection; `increasing`
/// gives its direction.  Stops at 1e-12 in angle or after 200 halvings.
template <class F>
double bisect_sign(F f, double lo, double hi, bool increasing) {
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if ((v < 0.0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// The single local minimum of G on each arc between consecutive points.
/// Coincident points give an empty arc whose minimum is infinite.
inline ArcMinima minimize_on_circle(const CircleConfig& cfg) {
  if (cfg.size() == 0) throw std::invalid_argument("empty configuration");
  const std::vector<double> a = detail::sorted_angles(cfg);
  const std::size_t n = a.size();
  ArcMinima out;
  for (std::size_t j = 0; j < n; ++j) {
    ArcMinimum arc;
    arc.start = a[j];
    arc.end = j + 1 < n ? a[j + 1] : a[0] + kTwoPi;
    if (arc.end > arc.start) {
      arc.angle = detail::bisect_sign([&](double t) { return g_sum_derivative(cfg, t); }, arc.start, arc.end, true);
      arc.value = g_sum(cfg, arc.angle);
      arc.angle = wrap_angle(arc.angle);
    } else {
      arc.angle = arc.start;
    }
    if (arc.value < out.M) {
      out.M = arc.value;
      out.argmin = arc.angle;
    }
    out.arcs.push_back(arc);
  }
  return out;
}

/// max over the circle of prod |z - z_j|.  The log is concave on each arc,
/// so each arc maximum is found by bisection on the derivative.
inline double chebyshev_sup(const CircleConfig& cfg) {
  if (cfg.size() == 0) throw std::invalid_argument("empty configuration");
  const std::vector<double> a = detail::sorted_angles(cfg);
  const std::size_t n = a.size();
  auto log_prod = [&](double t) {
    double s = 0.0;
    for (double tj : a) s += 0.5 * std::log(detail::chord2(t, tj));
    return s;
  };
  auto dlog = [&](double t) {
    double s = 0.0;
    for (double tj : a) s += 0.5 / std::tan(0.5 * (t - tj));
    return s;
  };
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = a[j];
    const double hi = j + 1 < n ? a[j + 1] : a[0] + kTwoPi;
    if (!(hi > lo)) continue;
    const double t = detail::bisect_sign(dlog, lo, hi, false);
    best = std::max(best, log_prod(t));
  }
  return std::exp(best);
}

/// Roots of g + gamma g*, where g* is the reciprocal at the degree of g.
/// All roots of g must lie on one side of the circle (closed disc or the
/// closed exterior); then every root of the sum is unimodular.
inline std::vector<Complex> sum_with_unimodular(const ComplexPolynomial& g, Complex gamma) {
  if (g.is_zero()) throw std::invalid_argument("g must be nonzero");
  if (std::abs(std::abs(gamma) - 1.0) > 1e-12) throw std::invalid_argument("gamma must be unimodular");
  constexpr double kSide = 1e-9;
  bool inside = false;
  bool outside = false;
  for (const Complex& r : roots(g)) {
    inside = inside || std::abs(r) < 1.0 - kSide;
    outside = outside || std::abs(r) > 1.0 + kSide;
  }
  if (inside && outside) throw std::invalid_argument("g has roots on both sides of the unit circle");
  return roots(g + gamma * reciprocal(g, g.degree()));
}

/// Roots of z g'(z) - (n/2) g(z) for g of degree n with unimodular roots.
inline std::vector<Complex> derivative_shift_roots(const ComplexPolynomial& g) {
  const std::size_t n = g.precise_degree();
  if (n < 1) throw std::invalid_argument("degree must be >= 1");
  // Computed roots of a clustered pair can be off by ~1e-9 even when exact.
  for (const Complex& r : roots(g)) {
    if (std::abs(std::abs(r) - 1.0) > 1e-7) throw std::invalid_argument("g has a root off the unit circle");
  }
  const ComplexPolynomial h =
      ComplexPolynomial::monomial(1) * g.derivative() - (0.5 * static_cast<double>(n)) * g.with_degree(n);
  return roots(h.with_degree(n));
}

/// g g* = N, where N(z) = -alpha^2 z sum_j z_j prod_{k != j} (z - z_k)^2 and
/// alpha^2 = (-1)^n prod conj(z_j).  On the circle N(z)/prod (z - z_k)^2 is a
/// positive multiple of G, so N is the numerator of a nonnegative
/// trigonometric polynomial.
struct FejerFactor {
  ComplexPolynomial g;          // degree n, roots in the closed disc
  std::vector<Complex> roots;   // of g
  ComplexPolynomial numerator;  // N
  Complex alpha;                // arg in [0, pi)
  double scale = 0.0;           // |leading coefficient of g|
  double residual = 0.0;        // max relative |g g* - N| on 64 points
};

inline ComplexPolynomial fejer_numerator(const CircleConfig& cfg, Complex* alpha2_out = nullptr) {
  const std::vector<Complex> z = cfg.points();
  const std::size_t n = z.size();
  Complex alpha2 = n % 2 == 0 ? 1.0 : -1.0;
  for (const Complex& zj : z) alpha2 *= std::conj(zj);
  ComplexPolynomial sum(std::vector<Complex>(2 * n - 1, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Complex> others;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) {
        others.push_back(z[k]);
        others.push_back(z[k]);
      }
    }
    sum = sum + ComplexPolynomial::from_roots(others, z[j]);
  }
  if (alpha2_out) *alpha2_out = alpha2;
  return (-alpha2) * (ComplexPolynomial::monomial(1) * sum);
}

namespace detail {

/// P(x) = sum_j z_j prod_{k != j} (x - z_k)^2, so that N = -alpha^2 x P.
inline Complex fejer_p(std::span<const Complex> z, Complex x) {
  Complex s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    Complex t = z[j];
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (k != j) t *= (x - z[k]) * (x - z[k]);
    }
    s += t;
  }
  return s;
}

/// P'/P from P = Q S with Q = prod (x - z_k)^2 and S = sum z_j/(x - z_j)^2.
/// Unlike the expanded coefficients this stays accurate when points crowd.
inline Complex fejer_p_log_derivative(std::span<const Complex> z, Complex x) {
  Complex sv = 0.0;
  Complex ds = 0.0;
  Complex dq = 0.0;
  for (const Complex& zj : z) {
    const Complex inv = 1.0 / (x - zj);
    sv += zj * inv * inv;
    ds -= 2.0 * zj * inv * inv * inv;
    dq += 2.0 * inv;
  }
  return ds / sv + dq;
}

inline Complex product_form(std::span<const Complex> r, Complex x) {
  Complex p = 1.0;
  for (const Complex& ri : r) p *= x - ri;
  return p;
}

}  // namespace detail

inline FejerFactor fejer_factorize(const CircleConfig& cfg) {
  const std::size_t n = cfg.size();
  if (n < 1) throw std::invalid_argument("empty configuration");
  const std::vector<Complex> z = cfg.points();
  FejerFactor f;
  Complex alpha2;
  f.numerator = fejer_numerator(cfg, &alpha2);
  f.alpha = std::sqrt(alpha2);
  if (!(std::arg(f.alpha) >= 0.0 && std::arg(f.alpha) < std::numbers::pi)) f.alpha = -f.alpha;

  // Roots of P from the expanded coefficients.  N is self-reciprocal, so
  // coefficients that vanish up to rounding at the top (roots at infinity,
  // e.g. when sum z_j = 0) mirror ones at the bottom (roots at the origin).
  std::vector<Complex> c(f.numerator.coefficients().begin() + 1, f.numerator.coefficients().end());
  double cmax = 0.0;
  for (const Complex& x : c) cmax = std::max(cmax, std::abs(x));
  const double negligible = 1e-13 * cmax;
  while (c.size() > 1 && std::abs(c.back()) <= negligible) c.pop_back();
  std::size_t zeros = 1;  // the factor z
  while (c.size() > 1 && std::abs(c.front()) <= negligible) {
    c.erase(c.begin());
    ++zeros;
  }
  const std::vector<Complex> raw = roots(ComplexPolynomial(c));
  // Crowded points make the expanded form ill-conditioned; polishing against
  // the partial-fraction form fixes that but loses accuracy near multiple
  // roots.  Keep whichever candidate reproduces N better.
  std::vector<Complex> polished = raw;
  detail::aberth_steps(polished, [&](Complex x) { return detail::fejer_p_log_derivative(z, x); },
                       RootOptions{1e-14, 100});

  const double nn = static_cast<double>(n);
  auto numer = [&](Complex u) { return -alpha2 * u * detail::fejer_p(z, u); };
  constexpr double kBoundary = 1e-9;
  struct Candidate {
    std::vector<Complex> r;
    double scale = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    std::string error;
  };
  auto assess = [&](std::vector<Complex> r) {
    Candidate cand;
    r.insert(r.end(), zeros, Complex{0.0});
    if (r.size() < n) {
      cand.error = "too few finite roots";
      return cand;
    }
    std::sort(r.begin(), r.end(), [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
    if (std::abs(r[n - 1]) > 1.0 + kBoundary || (r.size() > n && std::abs(r[n]) < 1.0 - kBoundary)) {
      std::ostringstream msg;
      msg << "roots do not pair across the circle (|r_n| = " << std::abs(r[n - 1]) << ")";
      cand.error = msg.str();
      return cand;
    }
    r.resize(n);
    // On the circle g*(u) = u^n conj(g(u)), so g g* = |c|^2 u^n |m(u)|^2
    // for the monic factor m.
    auto monic_gg = [&](Complex u) { return std::pow(u, nn) * std::norm(detail::product_form(r, u)); };
    const Complex w = std::polar(1.0, 0.3);
    cand.scale = std::sqrt(std::abs(numer(w) / monic_gg(w)));
    cand.residual = 0.0;
    for (int k = 0; k < 64; ++k) {
      const Complex u = std::polar(1.0, kTwoPi * (k + 0.5) / 64.0);
      const Complex rhs = numer(u);
      const double err = std::abs(cand.scale * cand.scale * monic_gg(u) - rhs) / std::max(std::abs(rhs), 1e-300);
      cand.residual = std::max(cand.residual, err);
    }
    cand.r = std::move(r);
    return cand;
  };
  Candidate best = assess(raw);
  Candidate other = assess(polished);
  if (other.residual < best.residual) best = std::move(other);
  if (best.r.empty()) throw std::runtime_error("Fejer factorization: " + best.error);
  f.scale = best.scale;
  f.residual = best.residual;
  f.g = ComplexPolynomial::from_roots(best.r, f.scale * f.alpha);
  f.roots = std::move(best.r);
  if (f.residual > 1e-7) {
    std::ostringstream msg;
    msg << "Fejer factorization: reconstruction residual " << f.residual;
    throw std::runtime_error(msg.str());
  }
  return f;
}

/// Smallest angular gap between two configuration points.
inline double min_separation(const CircleConfig& cfg) {
  const std::vector<double> a = detail::sorted_angles(cfg);
  if (a.size() < 2) return kTwoPi;
  double gap = a.front() + kTwoPi - a.back();
  for (std::size_t j = 1; j < a.size(); ++j) gap = std::min(gap, a[j] - a[j - 1]);
  return gap;
}

/// Angles of the roots of g + g*, sorted.
inline CircleConfig phi_iterate(const CircleConfig& cfg) {
  if (cfg.size() == 0) throw std::invalid_argument("empty configuration");
  if (min_separation(cfg) <= 1e-12) throw std::invalid_argument("Phi is undefined for coincident points");
  const FejerFactor f = fejer_factorize(cfg);
  std::vector<Complex> r = roots(f.g + reciprocal(f.g, cfg.size()));
  if (r.size() != cfg.size()) throw std::runtime_error("Phi: wrong number of roots");
  // Polish with g + g* in product form: g = c prod (u - r_i) and
  // g* = conj(c) prod (1 - conj(r_i) u).
  const Complex lead = f.g.leading();
  detail::aberth_steps(
      r,
      [&](Complex u) {
        Complex g = lead;
        Complex gs = std::conj(lead);
        Complex dg = 0.0;
        Complex dgs = 0.0;
        for (const Complex& ri : f.roots) {
          g *= u - ri;
          gs *= 1.0 - std::conj(ri) * u;
          dg += 1.0 / (u - ri);
          dgs -= std::conj(ri) / (1.0 - std::conj(ri) * u);
        }
        return (g * dg + gs * dgs) / (g + gs);
      },
      RootOptions{1e-14, 100});
  std::vector<double> a;
  for (const Complex& x : r) {
    if (std::abs(std::abs(x) - 1.0) > 1e-8) throw std::runtime_error("Phi: root off the unit circle");
    a.push_back(wrap_angle(std::arg(x)));
  }
  std::sort(a.begin(), a.end());
  return CircleConfig(std::move(a));
}

/// Largest distance between matched points of two sorted configurations,
/// minimized over cyclic shifts of the matching.
inline double config_distance(const CircleConfig& a, const CircleConfig& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::vector<double> x = detail::sorted_angles(a);
  const std::vector<double> y = detail::sorted_angles(b);
  const std::size_t n = x.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(std::remainder(x[j] - y[(j + s) % n], kTwoPi));
      worst = std::max(worst, d);
    }
    best = std::min(best, worst);
  }
  return best;
}

struct PhiStep {
  std::size_t step = 0;
  CircleConfig cfg;
  double M = 0.0;
};

/// Repeated Phi from cfg; stops after max_steps or at a fixed point.
inline std::vector<PhiStep> phi_trajectory(const CircleConfig& cfg, std::size_t max_steps, double fixed_tol = 1e-12) {
  std::vector<PhiStep> out{{0, cfg, minimize_on_circle(cfg).M}};
  for (std::size_t s = 1; s <= max_steps; ++s) {
    CircleConfig next = phi_iterate(out.back().cfg);
    const bool fixed = config_distance(next, out.back().cfg) <= fixed_tol;
    const double m = minimize_on_circle(next).M;
    out.push_back({s, std::move(next), m});
    if (fixed) break;
  }
  return out;
}

/// |sum_j 1/sin^2(t/2 - j pi/n) - c n^2/(1 - cos nt)| with c = 2 by default;
/// other values of c are only useful as a negative control.
inline double cosform_residual(std::size_t n, double t, double constant = 2.0) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double nn = static_cast<double>(n);
  double lhs = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double s = std::sin(0.5 * t - static_cast<double>(j) * std::numbers::pi / nn);
    if (s == 0.0) throw std::domain_error("cosform evaluated at a pole");
    lhs += 1.0 / (s * s);
  }
  const double h = std::sin(0.5 * nn * t);  // 1 - cos nt = 2 sin^2(nt/2)
  if (h == 0.0) throw std::domain_error("cosform evaluated at a pole");
  return std::abs(lhs - 0.5 * constant * nn * nn / (h * h));
}

inline double riesz_node_sum(std::size_t n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double nn = static_cast<double>(n);
  double s = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double v = std::sin(static_cast<double>(j) * std::numbers::pi / nn - std::numbers::pi / (2.0 * nn));
    s += 1.0 / (v * v);
  }
  return s;
}

/// Order of equioscillation of a function sampled at equally spaced points of
/// the circle: half the number of sign alternations among the samples where
/// |f| is within `tolerance` of max |f|.
inline std::size_t equioscillation_order(std::span<const double> values, double tolerance) {
  if (values.empty()) throw std::invalid_argument("no samples");
  double norm = 0.0;
  for (double v : values) norm = std::max(norm, std::abs(v));
  if (norm == 0.0) return 0;
  std::vector<int> signs;
  for (double v : values) {
    if (std::abs(v) >= norm - tolerance) {
      const int s = v > 0 ? 1 : -1;
      if (signs.empty() || signs.back() != s) signs.push_back(s);
    }
  }
  // Cyclic: a run wrapping past the end merges with the first one.
  if (signs.size() > 1 && signs.front() == signs.back()) signs.pop_back();
  const std::size_t order = signs.size() < 2 ? 0 : signs.size() / 2;
  if (values.size() < 64 * order) throw std::invalid_argument("sampling too sparse for the detected order");
  return order;
}

}  // namespace polychain

#endif  // POLYCHAIN_CIRCLE_HPP
