#pragma once

#include <random>
#include <vector>

#include "modeq/equivalence.hpp"
#include "modeq/pencils.hpp"

namespace modeq::testing {

inline Rational R(long p, long q = 1) { return Rational(p, q); }

// Deterministic source of small rationals.
class RationalSource {
 public:
  explicit RationalSource(unsigned seed) : gen_(seed) {}

  Rational next(long max_num = 9, long max_den = 7) {
    std::uniform_int_distribution<long> num(-max_num, max_num), den(1, max_den);
    return Rational(num(gen_), den(gen_));
  }
  Rational nonzero(long max_num = 9, long max_den = 7) {
    for (;;) {
      Rational r = next(max_num, max_den);
      if (!r.is_zero()) return r;
    }
  }
  DensityPair pair(long max_num = 9, long max_den = 5) { return {next(max_num, max_den), next(max_num, max_den)}; }
  int index(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

 private:
  std::mt19937 gen_;
};

// (lambda, mu) from (c, delta), c = lambda + mu - 1.
inline DensityPair from_c_delta(const Rational& c, const Rational& delta) {
  return {(c + Rational(1) - delta) / Rational(2), (c + Rational(1) + delta) / Rational(2)};
}

// The Bol pair (3(nu+1)^2, nu) and (3 nu^2, nu+1).
inline std::pair<DensityPair, DensityPair> bol_pair(const Rational& nu) {
  return {{Rational(1), nu + Rational(1)}, {Rational(0), nu + Rational(1)}};
}

// Gap-1 reads as g.
inline GDPoly Bsym(const Rational& m, int r) { return r == 1 ? gd::g() : B_symbolic(m, r); }

// Pairs on one line through two base points of a pencil; each such line lies in a single level.
inline std::vector<std::pair<DensityPair, DensityPair>> same_level_pairs(const PencilFamily& f, RationalSource& src,
                                                                         int per_line) {
  std::vector<std::pair<DensityPair, DensityPair>> out;
  auto v = base_points(f);
  Rational shear = f.shear();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      PlanePoint P = v[a], Q = v[b];
      Rational slope = (Q.x - P.x) + shear * (Q.y - P.y);  // d(gamma)/dt
      if (slope.is_zero()) continue;
      auto at = [&](const Rational& c) {
        Rational t = (Rational(3) * c * c - P.x - shear * P.y) / slope;
        return from_c_delta(c, P.y + t * (Q.y - P.y));
      };
      for (int k = 0; k < per_line; ++k) out.push_back({at(src.nonzero(7, 4)), at(src.nonzero(7, 4))});
    }
  return out;
}

}  // namespace modeq::testing

// Equivalence criteria transcribed directly from the published statements, independent of the solver.
namespace modeq::forms {

inline QSqrt3 svc_fn(const Rational& n, int i, int j, const DensityPair& p) {
  return QSqrt3(pochhammer(p.delta() - n - Rational(j), i - j)) * B_eval(n + Rational(j), i - j, p);
}

inline bool same_vanishing(const Rational& n, const std::vector<std::pair<int, int>>& ij, const DensityPair& a,
                           const DensityPair& b) {
  for (auto [i, j] : ij)
    if (svc_fn(n, i, j, a).is_zero() != svc_fn(n, i, j, b).is_zero()) return false;
  return true;
}

inline bool any_vanishes(const Rational& n, const std::vector<std::pair<int, int>>& ij, const DensityPair& p) {
  for (auto [i, j] : ij)
    if (svc_fn(n, i, j, p).is_zero()) return true;
  return false;
}

inline bool same_invariant(InvariantKind k, const Rational& n, const DensityPair& a, const DensityPair& b) {
  auto va = invariant(k, n, a).value, vb = invariant(k, n, b).value;
  return va && vb && *va == *vb;
}

inline QSqrt3 Bv(const Rational& n, int i, int j, const DensityPair& p) { return B_eval(n + Rational(j), i - j, p); }

// Displayed gap 2, 3, 4 coefficients.
inline GDPoly three_b_line(const Rational& m, int r) {
  GDPoly g = gd::g(), d = gd::d(), gamma = g * g;
  auto k = [](const Rational& x) { return GDPoly(x); };
  switch (r) {
    case 2: return gamma - (k(Rational(2) * m + Rational(1)) * d + k(m * m + m + Rational(1)));
    case 3: return g * gamma - k(3) * g * (k(m + Rational(1)) * d + k(1));
    default: {
      Rational a = Rational(2) * m + Rational(3);
      return gamma * gamma - gamma * (k(Rational(2) * a) * d - k(Rational(2) * m * m + Rational(6) * m - Rational(3))) -
             k(Rational(3, 5) * m * (m + Rational(3))) * (k(Rational(2) * a) * d + k(m * m + Rational(3) * m + Rational(6)));
    }
  }
}

// Displayed closed forms of the auxiliary combinations.
inline GDPoly aux_display(AuxKind kind, const Rational& n) {
  GDPoly g = gd::g(), d = gd::d(), gamma = g * g;
  auto k = [](const Rational& x) { return GDPoly(x); };
  Rational N5 = N_of(n, 5), N6 = N_of(n, 6);
  GDPoly lin1 = k(Rational(2) * N5) * d + k(N5 * N5 + Rational(3, 4));
  switch (kind) {
    case AuxKind::B420: return gamma - (d * d + k(Rational(8, 5) * N5) * d + k(Rational(2, 5) * N5 * N5 + Rational(1, 2)));
    case AuxKind::B4310:
      return gamma * gamma - gamma * (d * d + k(Rational(12, 5) * N5) * d + k(Rational(13, 5) * N5 * N5 + Rational(3, 4))) +
             k(Rational(3, 5)) * lin1 * (k(Rational(4) * N5) * d + k(N5 * N5 + Rational(15, 4)));
    case AuxKind::Bminus43210:
      return k(2) * gamma * (k(Rational(3) * N5) * d - k(Rational(3) * N5 * N5 - Rational(5, 4))) -
             lin1 * (k(5) * d * d - k(Rational(4) * N5) * d - k(N5 * N5 + Rational(35, 4)));
    case AuxKind::Bplus43210:
      return gamma * gamma - gamma * (d * d + k(Rational(3) * N5) * d + k(Rational(2) * N5 * N5 + Rational(1))) +
             k(Rational(1, 2)) * lin1 * (d * d + k(Rational(4) * N5) * d + k(N5 * N5 + Rational(11, 4)));
    case AuxKind::B5320: return g * gamma - g * (d * d + k(Rational(2) * N6) * d + k(3));
  }
  return {};
}

// Non-resonant length 5.
inline bool nonres5(const Rational& n, const DensityPair& a, const DensityPair& b) {
  std::vector<std::pair<int, int>> all = {{2, 0}, {3, 0}, {4, 0}, {3, 1}, {4, 1}, {4, 2}};
  if (!same_vanishing(n, all, a, b)) return false;
  Rational pa = pochhammer(a.delta() - n, 4), pb = pochhammer(b.delta() - n, 4);
  if ((pa * pb).is_zero()) return true;
  bool x = Bv(n, 4, 0, a).is_zero();
  bool y = (Bv(n, 4, 2, a) * Bv(n, 2, 0, a)).is_zero();
  bool z = (Bv(n, 4, 1, a) * Bv(n, 3, 0, a) * Bv(n, 3, 1, a)).is_zero();
  int zeros = int(x) + int(y) + int(z);
  if (zeros >= 2) return true;
  if (z) return same_invariant(InvariantKind::I, n, a, b);
  if (y) return same_invariant(InvariantKind::J, n, a, b);
  if (x) return same_invariant(InvariantKind::K, n, a, b);
  return same_invariant(InvariantKind::I, n, a, b) && same_invariant(InvariantKind::J, n, a, b);
}

// Lacunary {0,2,4}.
inline bool lac024(const Rational& n, const DensityPair& a, const DensityPair& b) {
  std::vector<std::pair<int, int>> f = {{2, 0}, {4, 2}, {4, 0}};
  if (!same_vanishing(n, f, a, b)) return false;
  if (any_vanishes(n, f, a)) return true;
  return same_invariant(InvariantKind::I, n, a, b);
}

// Lacunary {0,2,3,5}.
inline bool lac0235(const Rational& n, const DensityPair& a, const DensityPair& b) {
  std::vector<std::pair<int, int>> f = {{2, 0}, {5, 3}, {3, 0}, {5, 2}};
  if (!same_vanishing(n, f, a, b)) return false;
  if (any_vanishes(n, f, a)) return true;
  return same_invariant(InvariantKind::M, n, a, b);
}

// Lacunary {0,2,3,4,5}.
inline bool lac02345(const Rational& n, const DensityPair& a, const DensityPair& b) {
  std::vector<std::pair<int, int>> f = {{2, 0}, {4, 2}, {5, 3}, {3, 0}, {5, 2}, {4, 0}};
  if (!same_vanishing(n, f, a, b)) return false;
  if (!any_vanishes(n, {{2, 0}, {4, 2}, {4, 0}}, a) && !same_invariant(InvariantKind::I, n, a, b)) return false;
  if (!any_vanishes(n, {{2, 0}, {5, 3}, {3, 0}, {5, 2}}, a) && !same_invariant(InvariantKind::M, n, a, b)) return false;
  return true;
}

// Only (2,0) vanishes among the six {0,2,3,4,5} functions: the literal statement imposes nothing more, but
// the other five edges still close the cycle 0-4-2-5-3-0.
inline bool only_20_vanishes(const Rational& n, const DensityPair& p) {
  return svc_fn(n, 2, 0, p).is_zero() && !any_vanishes(n, {{4, 2}, {5, 3}, {3, 0}, {5, 2}, {4, 0}}, p);
}

inline QSqrt3 cycle_04253(const Rational& n, const DensityPair& p) {
  return svc_fn(n, 4, 0, p) * svc_fn(n, 5, 2, p) / (svc_fn(n, 4, 2, p) * svc_fn(n, 5, 3, p) * svc_fn(n, 3, 0, p));
}

// Length 8 and beyond, non-resonant: equal (gamma, delta) or a Bol pair.
inline bool long_rule(const DensityPair& a, const DensityPair& b) {
  if (a.gamma() == b.gamma() && a.delta() == b.delta()) return true;
  auto bol = [](const DensityPair& x, const DensityPair& y) {
    Rational nu = x.delta();
    return y.delta() == nu + Rational(1) && x.gamma() == Rational(3) * (nu + Rational(1)) * (nu + Rational(1)) &&
           y.gamma() == Rational(3) * nu * nu;
  };
  return bol(a, b) || bol(b, a);
}

}  // namespace modeq::forms
