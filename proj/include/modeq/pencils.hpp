#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "modeq/invariants.hpp"

namespace modeq {

enum class Coordinates { GammaDelta, GammaTilde5Delta, GammaTilde6Delta };

inline std::string to_string(Coordinates c) {
  switch (c) {
    case Coordinates::GammaDelta: return "gamma,delta";
    case Coordinates::GammaTilde5Delta: return "gamma_tilde5,delta";
    case Coordinates::GammaTilde6Delta: return "gamma_tilde6,delta";
  }
  return "?";
}

// Polynomials in the plane coordinates (x, y).
using XYPoly = SparsePoly<2>;

// A x^2 + B xy + C y^2 + D x + E y + F
struct Conic {
  QSqrt3 A, B, C, D, E, F;
  Coordinates coords = Coordinates::GammaDelta;

  QSqrt3 eval(const QSqrt3& x, const QSqrt3& y) const {
    return A * x * x + B * x * y + C * y * y + D * x + E * y + F;
  }
  Conic scaled(const QSqrt3& s) const { return {A * s, B * s, C * s, D * s, E * s, F * s, coords}; }
  bool is_trivial() const { return A.is_zero() && B.is_zero() && C.is_zero() && D.is_zero() && E.is_zero(); }
  bool is_rational() const {
    return A.is_rational() && B.is_rational() && C.is_rational() && D.is_rational() && E.is_rational() &&
           F.is_rational();
  }
};

inline Conic conic_from_poly(const XYPoly& p, Coordinates coords) {
  if (p.total_degree() > 2) throw Error("polynomial is not a conic");
  return {p.coeff({2, 0}), p.coeff({1, 1}), p.coeff({0, 2}), p.coeff({1, 0}), p.coeff({0, 1}), p.coeff({0, 0}), coords};
}

enum class ConicClass { Ellipse, Hyperbola, Parabola, ParallelLines, CrossingLines, DoubleLine, Point, Empty };

inline std::string to_string(ConicClass c) {
  switch (c) {
    case ConicClass::Ellipse: return "Ellipse";
    case ConicClass::Hyperbola: return "Hyperbola";
    case ConicClass::Parabola: return "Parabola";
    case ConicClass::ParallelLines: return "ParallelLines";
    case ConicClass::CrossingLines: return "CrossingLines";
    case ConicClass::DoubleLine: return "DoubleLine";
    case ConicClass::Point: return "Point";
    case ConicClass::Empty: return "Empty";
  }
  return "?";
}

inline bool is_line_pair(ConicClass c) {
  return c == ConicClass::ParallelLines || c == ConicClass::CrossingLines || c == ConicClass::DoubleLine ||
         c == ConicClass::Point;
}

// Real classification from the quadratic discriminant and the 3x3 determinant.
inline ConicClass classify_conic(const Conic& c) {
  QSqrt3 half(Rational(1, 2));
  QSqrt3 b = c.B * half, d = c.D * half, e = c.E * half;
  QSqrt3 det = c.A * (c.C * c.F - e * e) - b * (b * c.F - e * d) + d * (b * e - c.C * d);
  QSqrt3 disc = c.B * c.B - QSqrt3(4) * c.A * c.C;
  int sd = disc.sign();
  if (c.A.is_zero() && c.B.is_zero() && c.C.is_zero()) {
    // Degree one or constant: a single line is reported as a double line.
    if (c.D.is_zero() && c.E.is_zero()) return ConicClass::Empty;
    return ConicClass::DoubleLine;
  }
  if (!det.is_zero()) {
    if (sd > 0) return ConicClass::Hyperbola;
    if (sd == 0) return ConicClass::Parabola;
    QSqrt3 trace = c.A + c.C;
    return (trace * det).sign() < 0 ? ConicClass::Ellipse : ConicClass::Empty;
  }
  if (sd > 0) return ConicClass::CrossingLines;
  if (sd < 0) return ConicClass::Point;
  QSqrt3 k = (c.A * c.F - d * d) + (c.C * c.F - e * e);
  int sk = k.sign();
  if (sk < 0) return ConicClass::ParallelLines;
  if (sk == 0) return ConicClass::DoubleLine;
  return ConicClass::Empty;
}

struct PencilFamily {
  enum class Kind { Rtilde, Ipencil, Mpencil };
  Kind kind = Kind::Rtilde;
  Rational param;  // N5 for Ipencil, N6 for Mpencil

  static PencilFamily rtilde() { return {Kind::Rtilde, Rational(0)}; }
  static PencilFamily ipencil(const Rational& N5) {
    if (N5 * N5 == Rational(1) || N5 * N5 == Rational(9, 4)) throw DomainError("Ipencil needs N5 not in {+-1, +-3/2}");
    return {Kind::Ipencil, N5};
  }
  static PencilFamily mpencil(const Rational& N6) {
    if (N6.is_zero()) throw DomainError("Mpencil needs N6 != 0");
    return {Kind::Mpencil, N6};
  }

  Coordinates coords() const {
    switch (kind) {
      case Kind::Rtilde: return Coordinates::GammaDelta;
      case Kind::Ipencil: return Coordinates::GammaTilde5Delta;
      case Kind::Mpencil: return Coordinates::GammaTilde6Delta;
    }
    return Coordinates::GammaDelta;
  }

  // gamma = x + shear * delta
  Rational shear() const {
    switch (kind) {
      case Kind::Rtilde: return Rational(0);
      case Kind::Ipencil: return Rational(2) * param;
      case Kind::Mpencil: return Rational(5, 2) * param;
    }
    return Rational(0);
  }

  std::string name() const {
    switch (kind) {
      case Kind::Rtilde: return "Rtilde";
      case Kind::Ipencil: return "I";
      case Kind::Mpencil: return "M";
    }
    return "?";
  }
};

// A pencil level; infinite levels select the denominator curve.
struct Level {
  Rational value;
  bool infinite = false;
  static Level inf() { return {Rational(0), true}; }
  std::string str() const { return infinite ? "inf" : value.str(); }
};

struct PlanePoint {
  Rational x;
  Rational y;
  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

namespace detail {

// Even polynomial in (g, d) rewritten in (gamma, delta).
inline XYPoly even_to_gamma_delta(const GDPoly& p) {
  if (!gd::is_even(p)) throw Error("expected an even polynomial in g");
  XYPoly out;
  for (const auto& [e, c] : p.terms()) out += XYPoly::monomial({e[0] / 2, e[1]}, c);
  return out;
}

inline XYPoly shear_coordinates(const XYPoly& p, const Rational& shear) {
  if (shear.is_zero()) return p;
  XYPoly gamma = XYPoly::variable(0) + XYPoly::variable(1).scaled(QSqrt3(shear));
  return p.compose(0, gamma);
}

}  // namespace detail

// Numerator and denominator of the pencil's invariant, in the family's coordinates.
inline std::pair<XYPoly, XYPoly> pencil_pair(const PencilFamily& f) {
  RatioForm form;
  switch (f.kind) {
    case PencilFamily::Kind::Rtilde: form = invariant_form(InvariantKind::Rtilde, Rational(0)); break;
    case PencilFamily::Kind::Ipencil: form = invariant_form(InvariantKind::I, f.param - Rational(3, 2)); break;
    case PencilFamily::Kind::Mpencil: {
      form = invariant_form(InvariantKind::Mtilde, f.param - Rational(2));
      form.num = form.num.divide_by_variable(0);
      form.den = form.den.divide_by_variable(0);
      break;
    }
  }
  return {detail::shear_coordinates(detail::even_to_gamma_delta(form.num), f.shear()),
          detail::shear_coordinates(detail::even_to_gamma_delta(form.den), f.shear())};
}

inline Conic conic_at_level(const PencilFamily& f, const Level& level) {
  auto [num, den] = pencil_pair(f);
  XYPoly p = level.infinite ? den : num - den.scaled(QSqrt3(level.value));
  Conic c = conic_from_poly(p, f.coords());
  if (c.is_trivial()) throw DomainError("level " + level.str() + " gives no curve");
  return c;
}

// The displayed Ipencil equation, LHS - RHS, in (gamma_tilde5, delta).
inline Conic ipencil_displayed(const Rational& N5, const Rational& I) {
  XYPoly x = XYPoly::variable(0), y = XYPoly::variable(1);
  auto k = [](const Rational& r) { return XYPoly(r); };
  Rational N2 = N5 * N5;
  XYPoly first = (x - k(N2 + Rational(15, 4))).scaled(QSqrt3(I - Rational(1))) + k(Rational(2) * (I - N2));
  XYPoly second = (y - k(N5 / Rational(5))).scaled(QSqrt3(I - N2)) + k(Rational(6, 5) * (I - Rational(1)) * N5);
  XYPoly lhs = (first * first).scaled(QSqrt3(I - N2)) - (second * second).scaled(QSqrt3(Rational(4) * (I - Rational(1))));
  Rational rhs = -Rational(1, 25) * (N2 - Rational(1)) * (Rational(9) * (I - Rational(1)) - Rational(4) * (I - N2)) *
                 (Rational(16) * N2 * (I - Rational(1)) - Rational(25) * (I - N2));
  return conic_from_poly(lhs - k(rhs), Coordinates::GammaTilde5Delta);
}

inline std::vector<PlanePoint> base_points(const PencilFamily& f) {
  const Rational& N = f.param;
  Rational N2 = N * N;
  switch (f.kind) {
    case PencilFamily::Kind::Rtilde:
      return {{Rational(0), Rational(1)}, {Rational(0), Rational(-1)}, {Rational(3), Rational(2)}, {Rational(3), Rational(-2)}};
    case PencilFamily::Kind::Ipencil:
      return {{N2 + Rational(4) * N + Rational(27, 4), N + Rational(5, 2)},
              {N2 - Rational(4) * N + Rational(27, 4), N - Rational(5, 2)},
              {N2 + Rational(4, 5) * N + Rational(3, 4), Rational(-3, 5) * N - Rational(1, 2)},
              {N2 - Rational(4, 5) * N + Rational(3, 4), Rational(-3, 5) * N + Rational(1, 2)}};
    case PencilFamily::Kind::Mpencil:
      return {{Rational(3), Rational(0)},
              {Rational(3, 2) * N2 + Rational(3), -N},
              {Rational(1, 2) * N2 + Rational(9, 2) * N + Rational(12), N + Rational(3)},
              {Rational(1, 2) * N2 - Rational(9, 2) * N + Rational(12), N - Rational(3)}};
  }
  return {};
}

// Line through two base points. Slopes are d(delta)/dx; inverse slopes dx/d(delta).
struct VertexLine {
  int a = 0;
  int b = 0;
  std::optional<Rational> slope;
  std::optional<Rational> inverse_slope;
};

struct QuadrilateralReport {
  std::vector<PlanePoint> vertices;
  std::vector<VertexLine> lines;
  bool cyclic = false;
  bool trapezoid = false;
  std::vector<PlanePoint> double_vertices;
};

inline bool concyclic(const std::vector<PlanePoint>& p) {
  // det [x^2+y^2, x, y, 1] over the four points
  Rational m[4][4];
  for (int i = 0; i < 4; ++i) {
    m[i][0] = p[i].x * p[i].x + p[i].y * p[i].y;
    m[i][1] = p[i].x;
    m[i][2] = p[i].y;
    m[i][3] = Rational(1);
  }
  Rational det(1);
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (!m[r][col].is_zero()) { piv = r; break; }
    if (piv < 0) return true;
    if (piv != col) {
      for (int k = 0; k < 4; ++k) std::swap(m[piv][k], m[col][k]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      Rational fct = m[r][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[r][k] -= fct * m[col][k];
    }
  }
  return det.is_zero();
}

inline QuadrilateralReport slopes_and_cyclicity(const PencilFamily& f) {
  if (f.kind == PencilFamily::Kind::Rtilde) throw DomainError("slopes_and_cyclicity needs Ipencil or Mpencil");
  QuadrilateralReport rep;
  rep.vertices = base_points(f);
  const auto& v = rep.vertices;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      VertexLine ln{a, b, std::nullopt, std::nullopt};
      Rational dx = v[b].x - v[a].x, dy = v[b].y - v[a].y;
      if (!dx.is_zero()) ln.slope = dy / dx;
      if (!dy.is_zero()) ln.inverse_slope = dx / dy;
      rep.lines.push_back(ln);
      if (dx.is_zero() && dy.is_zero()) rep.double_vertices.push_back(v[a]);
    }
  // Opposite lines share no vertex: (01,23), (02,13), (03,12).
  const int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  if (rep.double_vertices.empty()) {
    for (const auto& pr : pairs) {
      Rational dx1 = v[pr[1]].x - v[pr[0]].x, dy1 = v[pr[1]].y - v[pr[0]].y;
      Rational dx2 = v[pr[3]].x - v[pr[2]].x, dy2 = v[pr[3]].y - v[pr[2]].y;
      if ((dx1 * dy2 - dy1 * dx2).is_zero()) rep.trapezoid = true;
    }
  }
  rep.cyclic = concyclic(v);
  return rep;
}

// p + q*sqrt(s), s >= 0.
struct Surd {
  Rational p;
  Rational q;
  Rational s;

  bool is_rational() const { return q.is_zero() || s.is_zero(); }
  int sign() const {
    int sp = p.sign(), sq = s.is_zero() ? 0 : q.sign();
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    return p * p > q * q * s ? sp : sq;
  }
  Surd minus(const Rational& r) const { return {p - r, q, s}; }

  std::string decimal(int digits = 6) const {
    mpf_class root(0, 256), val(0, 256);
    mpf_class sv(s.raw(), 256);
    mpf_sqrt(root.get_mpf_t(), sv.get_mpf_t());
    val = mpf_class(p.raw(), 256) + mpf_class(q.raw(), 256) * root;
    char buf[256];
    gmp_snprintf(buf, sizeof buf, "%.*Ff", digits, val.get_mpf_t());
    std::string out(buf);
    if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') out.erase(0, 1);
    return out;
  }
};

struct CurvePoint {
  Surd x;
  Surd y;
};

struct CurveSample {
  Level level;
  std::vector<CurvePoint> points;
  std::vector<std::vector<std::size_t>> polylines;  // indices into points
};

struct Window {
  Rational x0, x1, y0, y1;
  void validate() const {
    if (!(x0 < x1) || !(y0 < y1)) throw DomainError("window must satisfy x0 < x1 and y0 < y1");
  }
  bool contains(const Rational& x, const Rational& y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

// Exact residue of a rational conic at a point with coordinates in Q(sqrt s): returns (rational part, sqrt-part).
inline std::pair<Rational, Rational> conic_residue(const Conic& c, const CurvePoint& pt) {
  if (!c.is_rational()) throw Error("conic_residue needs rational coefficients");
  Rational s = pt.x.is_rational() ? pt.y.s : pt.x.s;
  auto mul = [&](std::pair<Rational, Rational> u, std::pair<Rational, Rational> v) {
    return std::make_pair(u.first * v.first + u.second * v.second * s, u.first * v.second + u.second * v.first);
  };
  auto lift = [&](const Surd& z) {
    if (z.is_rational()) return std::make_pair(z.p, Rational(0));
    return std::make_pair(z.p, z.q);
  };
  auto x = lift(pt.x), y = lift(pt.y);
  auto term = [&](const QSqrt3& k, std::pair<Rational, Rational> v) {
    return std::make_pair(k.a() * v.first, k.a() * v.second);
  };
  std::pair<Rational, Rational> total{c.F.a(), Rational(0)};
  for (auto t : {term(c.A, mul(x, x)), term(c.B, mul(x, y)), term(c.C, mul(y, y)), term(c.D, x), term(c.E, y)}) {
    total.first += t.first;
    total.second += t.second;
  }
  return total;
}

namespace detail {

// Real roots of a y^2 + b y + c = 0, ordered; none when the column is identically zero.
inline std::vector<Surd> solve_quadratic(const Rational& a, const Rational& b, const Rational& c) {
  if (a.is_zero()) {
    if (b.is_zero()) return {};
    return {Surd{-c / b, Rational(0), Rational(0)}};
  }
  Rational disc = b * b - Rational(4) * a * c;
  if (disc.sign() < 0) return {};
  Rational p = -b / (Rational(2) * a);
  Rational q = abs(Rational(1) / (Rational(2) * a));
  if (disc.is_zero()) return {Surd{p, Rational(0), Rational(0)}};
  return {Surd{p, -q, disc}, Surd{p, q, disc}};
}

inline bool in_range(const Surd& v, const Rational& lo, const Rational& hi) {
  return v.minus(lo).sign() >= 0 && v.minus(hi).sign() <= 0;
}

}  // namespace detail

// Column sweep solving for y, then row sweep solving for x; base points appended last.
inline CurveSample sample_level_curve(const PencilFamily& f, const Level& level, const Window& w, int resolution) {
  w.validate();
  if (resolution < 2) throw DomainError("resolution must be at least 2");
  Conic c = conic_at_level(f, level);
  if (!c.is_rational()) throw Error("sampling needs a rational conic");
  CurveSample out{level, {}, {}};
  auto sweep = [&](bool columns) {
    std::vector<std::vector<std::size_t>> open(2);
    Rational lo = columns ? w.x0 : w.y0, hi = columns ? w.x1 : w.y1;
    for (int k = 0; k < resolution; ++k) {
      Rational t = lo + (hi - lo) * Rational(k, resolution - 1);
      // Quadratic in the free coordinate.
      Rational a, b, cc;
      if (columns) {
        a = c.C.a();
        b = c.B.a() * t + c.E.a();
        cc = c.A.a() * t * t + c.D.a() * t + c.F.a();
      } else {
        a = c.A.a();
        b = c.B.a() * t + c.D.a();
        cc = c.C.a() * t * t + c.E.a() * t + c.F.a();
      }
      auto roots = detail::solve_quadratic(a, b, cc);
      std::vector<bool> used(2, false);
      for (std::size_t r = 0; r < roots.size(); ++r) {
        std::size_t branch = roots.size() == 2 ? r : 0;
        const Surd& v = roots[r];
        if (!detail::in_range(v, columns ? w.y0 : w.x0, columns ? w.y1 : w.x1)) continue;
        Surd fixed{t, Rational(0), Rational(0)};
        out.points.push_back(columns ? CurvePoint{fixed, v} : CurvePoint{v, fixed});
        open[branch].push_back(out.points.size() - 1);
        used[branch] = true;
      }
      for (std::size_t br = 0; br < 2; ++br)
        if (!used[br] && !open[br].empty()) {
          if (open[br].size() > 1) out.polylines.push_back(open[br]);
          open[br].clear();
        }
    }
    for (auto& ln : open)
      if (ln.size() > 1) out.polylines.push_back(ln);
  };
  sweep(true);
  sweep(false);
  for (const auto& bp : base_points(f))
    if (w.contains(bp.x, bp.y))
      out.points.push_back({Surd{bp.x, Rational(0), Rational(0)}, Surd{bp.y, Rational(0), Rational(0)}});
  return out;
}

// Delta = 0 coefficients of I~ and J~ as (gamma^2 + a gamma + b)/(c gamma + d).
struct Delta0Coefficients {
  Rational aI, bI, cI, dI, aJ, bJ, cJ, dJ;
};

inline Delta0Coefficients delta0_coefficients(const Rational& N5) {
  Rational N2 = N5 * N5;
  return {Rational(-2) * (N2 + Rational(7, 4)),
          (N2 + Rational(2) * N5 + Rational(7, 4)) * (N2 - Rational(2) * N5 + Rational(7, 4)),
          Rational(1),
          Rational(-2, 5) * (N2 + Rational(5, 4)),
          Rational(-2) * (N2 + Rational(1, 2)),
          Rational(1, 2) * (N2 + Rational(3, 4)) * (N2 + Rational(11, 4)),
          Rational(-6) * (N2 - Rational(5, 12)),
          (N2 + Rational(3, 4)) * (N2 + Rational(35, 4))};
}

struct DoubleClass {
  Rational sum;      // gamma + gamma'
  Rational diff_sq;  // (gamma - gamma')^2
};

// The pair (gamma, 0), (gamma', 0) sharing one length-5 class, from equal I~ and J~.
inline std::optional<DoubleClass> delta0_double_class(const Rational& N5) {
  for (const Rational& bad : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(5, 2), Rational(5, 6)})
    if (N5 == bad || N5 == -bad) throw DomainError("delta0_double_class: exceptional N5 = " + N5.str());
  auto k = delta0_coefficients(N5);
  // Equal values at gamma != gamma' reduce to c p + d s = b c - a d for each invariant.
  Rational rI = k.bI * k.cI - k.aI * k.dI, rJ = k.bJ * k.cJ - k.aJ * k.dJ;
  Rational E = k.cI * k.dJ - k.cJ * k.dI;
  if (E.is_zero()) throw DomainError("delta0_double_class: E vanishes");
  Rational s = (k.cI * rJ - k.cJ * rI) / E;
  Rational p = (rI * k.dJ - rJ * k.dI) / E;
  Rational diff_sq = s * s - Rational(4) * p;
  if (diff_sq.is_zero()) return std::nullopt;
  return DoubleClass{s, diff_sq};
}

}  // namespace modeq
