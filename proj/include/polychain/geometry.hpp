#ifndef POLYCHAIN_GEOMETRY_HPP
#define POLYCHAIN_GEOMETRY_HPP

// Affine-invariant triangle geometry: the special parabola arc of a triangle,
// its homothetic copies, tangent lines, tangent-triangle subdivisions, the
// affine perimeter, and Hausdorff distances to the arc.
//
// Standard coordinates put the triangle at p0 = (0,1), p1 = (0,0),
// p2 = (1,0).  There the arc is sqrt(x) + sqrt(y) = 1, which is the quadratic
// Bezier curve with control polygon p0, p1, p2:
//
//     B(s) = (s^2, (1-s)^2),   s = sqrt(x) in [0,1].
//
// Functions taking an abscissa parameter p use p = s^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polychain {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double k, Point a) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Twice the signed area of (a, b, c); positive for counter-clockwise order.
constexpr double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

inline double distance_to_segment(Point q, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(q, a);
  const double t = std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
  return distance(q, a + t * ab);
}

/// Line a*x + b*y = c.
struct Line {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double eval(Point q) const { return a * q.x + b * q.y - c; }
};

class Triangle {
 public:
  Triangle(Point p0, Point p1, Point p2) : p0_(p0), p1_(p1), p2_(p2) {
    const double s = signed_area();
    if (!(std::abs(s) > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("degenerate triangle");
    }
  }

  static Triangle standard() { return {{0.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}}; }

  Point p0() const { return p0_; }
  Point p1() const { return p1_; }
  Point p2() const { return p2_; }
  double signed_area() const { return 0.5 * orient(p0_, p1_, p2_); }
  double area() const { return std::abs(signed_area()); }

 private:
  Point p0_, p1_, p2_;
};

inline double triangle_area(Point a, Point b, Point c) { return 0.5 * std::abs(orient(a, b, c)); }

/// x -> A x + b.
struct AffineMap {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};  // row-major 2x2
  Point b{};

  Point operator()(Point q) const {
    return {m[0] * q.x + m[1] * q.y + b.x, m[2] * q.x + m[3] * q.y + b.y};
  }
  double determinant() const { return m[0] * m[3] - m[1] * m[2]; }

  AffineMap inverse() const {
    const double det = determinant();
    if (det == 0.0) throw std::invalid_argument("singular affine map");
    AffineMap inv;
    inv.m = {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
    inv.b = {-(inv.m[0] * b.x + inv.m[1] * b.y), -(inv.m[2] * b.x + inv.m[3] * b.y)};
    return inv;
  }

  /// (this o other)(x) = this(other(x)).
  AffineMap compose(const AffineMap& other) const {
    AffineMap r;
    r.m = {m[0] * other.m[0] + m[1] * other.m[2], m[0] * other.m[1] + m[1] * other.m[3],
           m[2] * other.m[0] + m[3] * other.m[2], m[2] * other.m[1] + m[3] * other.m[3]};
    r.b = (*this)(other.b);
    return r;
  }

  /// Pulls a line back: returns the line L' with L'(x) = 0 iff L(map(x)) = 0.
  Line pull_back(const Line& l) const {
    return {l.a * m[0] + l.b * m[2], l.a * m[1] + l.b * m[3], l.c - (l.a * b.x + l.b * b.y)};
  }
};

/// Affine map sending (p0, p1, p2) to (0,1), (0,0), (1,0).
inline AffineMap to_standard(const Triangle& tri) {
  // Standard -> tri is x -> p1 + x*(p2 - p1) + y*(p0 - p1); invert it.
  const Point e1 = tri.p2() - tri.p1();
  const Point e2 = tri.p0() - tri.p1();
  AffineMap from;
  from.m = {e1.x, e2.x, e1.y, e2.y};
  from.b = tri.p1();
  return from.inverse();
}

inline void require_unit_interval(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
  }
}

/// Point of the homothetic arc with ratio 1 + r at abscissa parameter p.
inline Point gamma_point(double p, double r = 0.0) {
  require_unit_interval(p, "parabola parameter");
  if (!(r > -1.0 && r < 1.0)) throw std::invalid_argument("homothety offset must lie in (-1,1)");
  const double s = std::sqrt(p);
  return (1.0 + r) * Point{p, (1.0 - s) * (1.0 - s)};
}

/// Arc point and derivative in the Bezier parameter s = sqrt(x) of any triangle.
inline Point bezier_point(const Triangle& tri, double s) {
  const double u = 1.0 - s;
  return (u * u) * tri.p0() + (2.0 * s * u) * tri.p1() + (s * s) * tri.p2();
}

inline Point bezier_tangent(const Triangle& tri, double s) {
  return (2.0 * (1.0 - s)) * (tri.p1() - tri.p0()) + (2.0 * s) * (tri.p2() - tri.p1());
}

/// Tangent line at q to the member of the homothetic family through q, and
/// the two triangles it cuts off at the legs p0p1 and p1p2.
///
/// The line meets p0p1 at q0 = p0 + a (p1 - p0) and p1p2 at
/// q2 = p1 + b (p2 - p1); q = q0 + c (q2 - q0).  t1 and t2 are the areas of
/// (p0, q0, q) and (q, q2, p2) relative to the triangle.
struct TangentSplit {
  Point q;
  Line line;
  double r = 0.0;   // homothety offset of the arc through q
  double p = 0.0;   // abscissa parameter of the tangency point on the unscaled arc
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  Point q0;
  Point q2;
};

inline TangentSplit tangent_line(Point q) {
  if (!(q.x > 0.0 && q.y > 0.0 && q.x + q.y < 1.0)) {
    throw std::invalid_argument("tangent point must lie strictly inside the triangle");
  }
  TangentSplit out;
  out.q = q;
  const double sum = std::sqrt(q.x) + std::sqrt(q.y);
  const double scale = sum * sum;  // 1 + r
  out.r = scale - 1.0;
  out.p = q.x / scale;
  const double sp = std::sqrt(out.p);
  const double sq = std::sqrt(q.y / scale);
  out.line = {1.0 / sp, 1.0 / sq, scale};
  const double y0 = scale * sq;
  const double x2 = scale * sp;
  out.a = 1.0 - y0;
  out.b = x2;
  if (out.a < 0.0 || out.a > 1.0 || out.b < 0.0 || out.b > 1.0) {
    throw std::invalid_argument("tangent line does not cut both legs of the triangle");
  }
  out.c = q.x / x2;
  out.q0 = {0.0, y0};
  out.q2 = {x2, 0.0};
  const Triangle std_tri = Triangle::standard();
  out.t1 = triangle_area(std_tri.p0(), out.q0, q) / std_tri.area();
  out.t2 = triangle_area(q, out.q2, std_tri.p2()) / std_tri.area();
  return out;
}

/// Same construction in an arbitrary triangle; points and line are in the
/// triangle's own coordinates, ratios are affine invariants.
inline TangentSplit tangent_line(const Triangle& tri, Point q) {
  const AffineMap fwd = to_standard(tri);
  const AffineMap back = fwd.inverse();
  TangentSplit s = tangent_line(fwd(q));
  s.q = q;
  s.q0 = back(s.q0);
  s.q2 = back(s.q2);
  s.line = fwd.pull_back(s.line);
  return s;
}

/// Distance between the tangent of the arc at parameter p and the parallel
/// tangent of the arc scaled by 1 + r.
inline double parallel_tangent_distance(double p, double r) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("parameter must lie in (0,1)");
  const double s = 1.0 - std::sqrt(p);
  const double q = s * s;
  return std::abs(r) / std::sqrt(1.0 / p + 1.0 / q);
}

inline double mobius_deficiency(double a, double b, double c) {
  return 1.0 - std::cbrt(a * b * c) - std::cbrt((1.0 - a) * (1.0 - b) * (1.0 - c));
}

/// The c minimizing mobius_deficiency for fixed a, b.
inline double mobius_minimizing_c(double a, double b) {
  const double u = std::sqrt(a * b);
  const double v = std::sqrt((1.0 - a) * (1.0 - b));
  return u + v == 0.0 ? 0.5 : u / (u + v);
}

/// Triangle bounded by the arc tangents at Bezier parameters s0 < s1 and the
/// chord between the tangency points.
struct TangentTriangle {
  double s0 = 0.0;
  double s1 = 0.0;
  Point from;
  Point apex;
  Point to;
  double area = 0.0;
};

inline TangentTriangle tangent_triangle(const Triangle& tri, double s0, double s1) {
  TangentTriangle t{s0, s1, bezier_point(tri, s0), {}, bezier_point(tri, s1), 0.0};
  if (s1 <= s0) {
    t.apex = t.from;
    return t;
  }
  const Point d0 = bezier_tangent(tri, s0);
  const Point d1 = bezier_tangent(tri, s1);
  const double den = cross(d0, d1);
  if (den == 0.0) {
    t.apex = t.from;
    return t;
  }
  const double lambda = cross(t.to - t.from, d1) / den;
  t.apex = t.from + lambda * d0;
  t.area = triangle_area(t.from, t.apex, t.to);
  return t;
}

/// Consecutive tangent triangles along the arc, each of area t except the
/// last, which has area at most t.
inline std::vector<TangentTriangle> equal_area_subdivision(const Triangle& tri, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("subdivision area must be positive");
  std::vector<TangentTriangle> out;
  constexpr double kRelSlack = 1e-10;
  double s = 0.0;
  for (;;) {
    TangentTriangle rest = tangent_triangle(tri, s, 1.0);
    if (rest.area <= t * (1.0 + kRelSlack)) {
      out.push_back(rest);
      break;
    }
    double lo = s;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (tangent_triangle(tri, s, mid).area < t) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double next = 0.5 * (lo + hi);
    out.push_back(tangent_triangle(tri, s, next));
    s = next;
  }
  return out;
}

inline std::vector<TangentTriangle> equal_area_subdivision(double t) {
  return equal_area_subdivision(Triangle::standard(), t);
}

/// 2 * sum of cube roots of the tangent-triangle areas for tangency points at
/// the given abscissa parameters (nondecreasing, at least two).
inline double affine_perimeter(const Triangle& tri, std::span<const double> params) {
  if (params.size() < 2) throw std::invalid_argument("affine perimeter needs at least two points");
  double sum = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    require_unit_interval(params[i], "tangent parameter");
    if (i > 0 && params[i] < params[i - 1]) {
      throw std::invalid_argument("tangent parameters must be nondecreasing");
    }
  }
  for (std::size_t i = 1; i < params.size(); ++i) {
    sum += std::cbrt(tangent_triangle(tri, std::sqrt(params[i - 1]), std::sqrt(params[i])).area);
  }
  return 2.0 * sum;
}

inline double affine_perimeter(std::span<const double> params) {
  return affine_perimeter(Triangle::standard(), params);
}

/// Closest point of the standard arc.
struct GammaProjection {
  double s = 0.0;  // Bezier parameter, sqrt of the abscissa
  Point foot;
  double distance = 0.0;
};

inline GammaProjection project_to_gamma(Point q) {
  // d/ds |B(s) - q|^2 / 4 = 2s^3 - 3s^2 + (3 - x - y)s + (y - 1).
  const double k1 = 3.0 - q.x - q.y;
  const double k0 = q.y - 1.0;
  auto deriv = [&](double s) { return ((2.0 * s - 3.0) * s + k1) * s + k0; };
  std::vector<double> cuts{0.0};
  const double disc = 36.0 - 24.0 * k1;
  if (disc > 0.0) {
    const double r = std::sqrt(disc);
    for (double c : {(6.0 - r) / 12.0, (6.0 + r) / 12.0}) {
      if (c > 0.0 && c < 1.0) cuts.push_back(c);
    }
  }
  cuts.push_back(1.0);
  std::vector<double> candidates{0.0, 1.0};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    double lo = cuts[i - 1];
    double hi = cuts[i];
    double flo = deriv(lo);
    const double fhi = deriv(hi);
    if ((flo < 0.0) == (fhi < 0.0)) continue;
    for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = deriv(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    candidates.push_back(0.5 * (lo + hi));
  }
  GammaProjection best{0.0, {}, std::numeric_limits<double>::infinity()};
  for (double s : candidates) {
    const Point foot{s * s, (1.0 - s) * (1.0 - s)};
    const double d = distance(q, foot);
    if (d < best.distance) best = {s, foot, d};
  }
  return best;
}

inline double distance_to_gamma(Point q) { return project_to_gamma(q).distance; }

/// Symmetric Hausdorff distance between a polyline and the standard arc.
///
/// The arc is sampled at 20001 uniform Bezier parameters (arc spacing at most
/// 1e-4); each polyline edge is sampled with at least 16 subdivisions and
/// spacing at most 1e-4, and every polyline sample is projected exactly.
inline double hausdorff_to_gamma(std::span<const Point> path) {
  if (path.empty()) throw std::invalid_argument("empty path");
  constexpr int kGammaSamples = 20001;
  constexpr double kEdgeSpacing = 1e-4;

  double path_to_gamma = 0.0;
  auto visit = [&](Point q) { path_to_gamma = std::max(path_to_gamma, distance_to_gamma(q)); };
  visit(path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Point a = path[i - 1];
    const Point b = path[i];
    const int steps = std::max(16, static_cast<int>(std::ceil(distance(a, b) / kEdgeSpacing)));
    for (int k = 1; k <= steps; ++k) visit(a + (static_cast<double>(k) / steps) * (b - a));
  }

  double gamma_to_path = 0.0;
  for (int i = 0; i < kGammaSamples; ++i) {
    const double s = static_cast<double>(i) / (kGammaSamples - 1);
    const Point g{s * s, (1.0 - s) * (1.0 - s)};
    double best = distance(g, path[0]);
    for (std::size_t k = 1; k < path.size(); ++k) {
      best = std::min(best, distance_to_segment(g, path[k - 1], path[k]));
    }
    gamma_to_path = std::max(gamma_to_path, best);
  }
  return std::max(path_to_gamma, gamma_to_path);
}

}  // namespace polychain

#endif  // POLYCHAIN_GEOMETRY_HPP
