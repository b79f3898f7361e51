#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "modeq/exact_scalars.hpp"

namespace modeq {

struct DenominatorVanishes : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

// Parameters (lambda, mu) of one module.
struct DensityPair {
  Rational lambda;
  Rational mu;

  Rational delta() const { return mu - lambda; }
  Rational c() const { return lambda + mu - Rational(1); }
  Rational gamma() const { return Rational(3) * c() * c(); }
  QSqrt3 gamma_half() const { return {Rational(0), c()}; }

  DensityPair conjugate() const { return {Rational(1) - mu, Rational(1) - lambda}; }
  DensityPair swapped() const { return {mu, lambda}; }

  friend bool operator==(const DensityPair&, const DensityPair&) = default;
};

// Composition-series data: offset n, length l and the pattern of present rungs.
struct SeriesSpec {
  Rational n;
  int l = 1;
  std::vector<int> pattern;

  SeriesSpec() = default;
  SeriesSpec(Rational n_, int l_) : n(std::move(n_)), l(l_) {
    for (int i = 0; i < l; ++i) pattern.push_back(i);
    validate();
  }
  SeriesSpec(Rational n_, std::vector<int> pat) : n(std::move(n_)), pattern(std::move(pat)) {
    l = pattern.empty() ? 0 : pattern.back() + 1;
    validate();
  }

  void validate() const {
    if (l < 1) throw DomainError("series length must be positive");
    if (pattern.empty() || pattern.front() != 0) throw DomainError("pattern must start at 0");
    for (std::size_t i = 1; i < pattern.size(); ++i)
      if (pattern[i] <= pattern[i - 1]) throw DomainError("pattern must be strictly increasing");
    if (pattern.back() != l - 1) throw DomainError("pattern must end at l-1");
  }

  bool is_full() const { return static_cast<int>(pattern.size()) == l; }
  bool contains(int i) const { return std::binary_search(pattern.begin(), pattern.end(), i); }

  // N_l = n + l/2 - 1
  Rational N() const { return n + Rational(l, 2) - Rational(1); }

  friend bool operator==(const SeriesSpec& a, const SeriesSpec& b) {
    return a.n == b.n && a.l == b.l && a.pattern == b.pattern;
  }
};

// N_l(n) for an explicit length.
inline Rational N_of(const Rational& n, int l) { return n + Rational(l, 2) - Rational(1); }

// Index pair of B_{m+r,m}.
struct CoeffKey {
  Rational m;
  int r = 2;
};

namespace detail {

// The general B formula over any Q(sqrt3)-algebra T, with c = lambda+mu-1.
// Gap 1 is read as gamma^{1/2} = sqrt3 * c by convention.
template <class T>
T B_generic(const T& c, const T& delta, const T& m, int r) {
  if (r == 1) return c * T(QSqrt3::sqrt3());
  if (r < 2) throw DomainError("B needs gap r >= 2");
  T sum(0);
  for (int s = 0; s <= r - 2; ++s) {
    T bracket = c * T(Rational(r - s + 1)) - delta * T(Rational(r - s - 1)) -
                (m * T(Rational(2)) + T(Rational(r + s - 1)));
    sum = sum + T(gen_binomial(Rational(r + 1), s)) * pochhammer(m * T(Rational(2)) + T(Rational(r - 3)), r - s - 2) *
                    pochhammer(c - m, s) * bracket;
  }
  T lead = pochhammer(c - m, r);
  T corr = (m * T(Rational(2)) + T(Rational(r - 1))) * T(Rational(1, r * r - 1)) * sum;
  return T(three_pow_half(r)) * (lead + corr);
}

inline GDPoly c_symbol() { return gd::g() * GDPoly(QSqrt3(Rational(0), Rational(1, 3))); }

}  // namespace detail

inline GDPoly B_symbolic(const CoeffKey& key) {
  if (key.r < 2) throw DomainError("B_symbolic needs r >= 2");
  return detail::B_generic<GDPoly>(detail::c_symbol(), gd::d(), GDPoly(key.m), key.r);
}

inline GDPoly B_symbolic(const Rational& m, int r) { return B_symbolic(CoeffKey{m, r}); }

// Direct evaluation in Q(sqrt3), independent of the symbolic route.
inline QSqrt3 B_eval(const CoeffKey& key, const DensityPair& p) {
  if (key.r < 2) throw DomainError("B_eval needs r >= 2");
  return detail::B_generic<QSqrt3>(QSqrt3(p.c()), QSqrt3(p.delta()), QSqrt3(key.m), key.r);
}

inline QSqrt3 B_eval(const Rational& m, int r, const DensityPair& p) { return B_eval(CoeffKey{m, r}, p); }

// u -> B_{u+shift+r, u+shift} at fixed (lambda, mu). Gap 1 gives the constant gamma^{1/2}.
inline UPoly B_upoly(int r, const DensityPair& p, const Rational& shift) {
  if (r < 1) throw DomainError("B_upoly needs r >= 1");
  UPoly m = UPoly::u() + UPoly(shift);
  return detail::B_generic<UPoly>(UPoly(p.c()), UPoly(p.delta()), m, r);
}

// The non-resonant subdiagonal scalar b_{m+r,m}.
inline QSqrt3 b_cmz(const CoeffKey& key, const DensityPair& p) {
  const Rational& m = key.m;
  int r = key.r;
  if (r < 2) throw DomainError("b_cmz needs r >= 2");
  Rational den = Rational(12) * pochhammer(Rational(2) * m + Rational(2 * r - 2), r - 2) *
                 (Rational(2) * m + Rational(r - 1)) * pochhammer(Rational(2) * m + Rational(r - 3), r - 2);
  if (den.is_zero())
    throw DenominatorVanishes("b_cmz denominator vanishes at m=" + m.str() + ", r=" + std::to_string(r));
  Rational sign = (r % 2 == 1) ? Rational(1) : Rational(-1);
  Rational front = sign * Rational(r * r - 1) * pochhammer(p.delta() - m, r) / den;
  return three_pow_half(-r) * QSqrt3(front) * B_eval(key, p);
}

inline QSqrt3 b_cmz(const Rational& m, int r, const DensityPair& p) { return b_cmz(CoeffKey{m, r}, p); }

// True for m in {0, -1/2, -1, ...}.
inline bool is_nonpositive_half_integer(const Rational& m) { return m.is_half_integer() && m.sign() <= 0; }

// Resonant case: the antidiagonal scalar a_{1-m,m}.
inline QSqrt3 a_res(const Rational& m, const DensityPair& p) {
  if (!is_nonpositive_half_integer(m)) throw DomainError("a_res needs m in {0, -1/2, -1, ...}");
  if (m.is_zero()) return QSqrt3(-p.delta() * p.c() / Rational(2));
  long len = (Rational(1) - Rational(2) * m).to_long();
  Rational f = factorial((Rational(-2) * m).to_long());
  return QSqrt3(-pochhammer(p.delta() - m, static_cast<int>(len)) * pochhammer(p.c() - m, static_cast<int>(len)) /
                (Rational(2) * f * f));
}

namespace detail {

// Shared body of the resonant subdiagonal cases; the integral case is m = 0 with gap-1 B read as gamma^{1/2}.
// deriv_half is 1/2 d/du|_{u=m} (B_{u+r,u} - B_{u+r,u+1-2m} B_{u+1-2m,u}).
template <class T>
T bbar_body(const Rational& m, int r, const T& delta, const T& deriv_half, const T& B_top, const T& B_bottom) {
  Rational two_m = Rational(2) * m;
  long q = (two_m + Rational(r - 1)).to_long();  // 2m-1+r >= 2
  Rational sign = (((two_m - Rational(1) + Rational(r)).to_long()) % 2 == 0) ? Rational(1) : Rational(-1);
  Rational den = Rational(12) * pochhammer(two_m + Rational(2 * r - 2), r - 2) * Rational(q) *
                 factorial((two_m + Rational(r - 3)).to_long()) * factorial((-two_m).to_long());
  Rational front = sign * Rational(r * r - 1) / den;
  Rational bracket = Rational(1) / (Rational(1) - two_m) + Rational(2 * r, r * r - 1) -
                     Rational(2) * Rational(q) / (Rational(q) * Rational(q) - Rational(1));
  T poch = pochhammer(delta - T(m), r);
  return T(three_pow_half(-r) * QSqrt3(front)) * poch * (deriv_half - T(bracket) * B_top * B_bottom);
}

inline bool bbar_direct_range(const Rational& m, int r) {
  return is_nonpositive_half_integer(m) && Rational(2) * m + Rational(r) >= Rational(3);
}

inline bool bbar_dual_range(const Rational& m, int r) {
  Rational top = m + Rational(r);
  return top.is_half_integer() && top >= Rational(1) && Rational(2) * m + Rational(r) <= Rational(-1);
}

}  // namespace detail

// Resonant subdiagonal scalars and, by reflection, the dual range 2m+r <= -1.
inline QSqrt3 bbar_res(const CoeffKey& key, const DensityPair& p) {
  const Rational& m = key.m;
  int r = key.r;
  if (detail::bbar_dual_range(m, r)) {
    Rational mm = Rational(1) - m - Rational(r);
    QSqrt3 v = bbar_res(CoeffKey{mm, r}, p.swapped());
    return (r % 2 == 1) ? v : -v;
  }
  if (!detail::bbar_direct_range(m, r)) throw DomainError("bbar_res outside its range");
  Rational one_m2 = Rational(1) - Rational(2) * m;
  int low_gap = static_cast<int>(one_m2.to_long());
  int top_gap = r - low_gap;
  UPoly diff = B_upoly(r, p, Rational(0)) - B_upoly(top_gap, p, one_m2) * B_upoly(low_gap, p, Rational(0));
  QSqrt3 deriv_half = diff.derivative().eval(QSqrt3(m)) * QSqrt3(Rational(1, 2));
  QSqrt3 top = B_upoly(top_gap, p, Rational(1) - m).eval(QSqrt3(0));
  QSqrt3 bottom = B_upoly(low_gap, p, m).eval(QSqrt3(0));
  return detail::bbar_body<QSqrt3>(m, r, QSqrt3(p.delta()), deriv_half, top, bottom);
}

inline QSqrt3 bbar_res(const Rational& m, int r, const DensityPair& p) { return bbar_res(CoeffKey{m, r}, p); }

// Polynomials in (u, g, d), used for the symbolic form of bbar.
using UGDPoly = SparsePoly<3>;

namespace detail {
inline UGDPoly B_ugd(int r, const Rational& shift) {
  UGDPoly c = UGDPoly::variable(1) * UGDPoly(QSqrt3(Rational(0), Rational(1, 3)));
  UGDPoly m = UGDPoly::variable(0) + UGDPoly(shift);
  return B_generic<UGDPoly>(c, UGDPoly::variable(2), m, r);
}

inline GDPoly drop_u(const UGDPoly& p) {
  GDPoly out;
  for (const auto& [e, c] : p.terms()) {
    if (e[0] != 0) throw Error("unexpected u-dependence");
    out += GDPoly::monomial({e[1], e[2]}, c);
  }
  return out;
}
}  // namespace detail

// bbar as an exact polynomial in (g, d), for the direct range only.
inline GDPoly bbar_symbolic(const Rational& m, int r) {
  if (!detail::bbar_direct_range(m, r)) throw DomainError("bbar_symbolic outside the direct range");
  Rational one_m2 = Rational(1) - Rational(2) * m;
  int low_gap = static_cast<int>(one_m2.to_long());
  int top_gap = r - low_gap;
  using detail::B_ugd;
  UGDPoly diff = B_ugd(r, Rational(0)) - B_ugd(top_gap, one_m2) * B_ugd(low_gap, Rational(0));
  UGDPoly deriv_half = diff.derivative(0).substitute(0, QSqrt3(m)).scaled(QSqrt3(Rational(1, 2)));
  UGDPoly top = B_ugd(top_gap, Rational(1) - m).substitute(0, QSqrt3(0));
  UGDPoly bottom = B_ugd(low_gap, m).substitute(0, QSqrt3(0));
  UGDPoly full = detail::bbar_body<UGDPoly>(m, r, UGDPoly::variable(2), deriv_half, top, bottom);
  return detail::drop_u(full);
}

// H_k = 4(3 lambda + k - 2)(3 mu - k - 1) + (k-2)(k+1).
inline Rational H_k(const Rational& k, const DensityPair& p) {
  return Rational(4) * (Rational(3) * p.lambda + k - Rational(2)) * (Rational(3) * p.mu - k - Rational(1)) +
         (k - Rational(2)) * (k + Rational(1));
}

}  // namespace modeq
