#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "modeq/coefficients.hpp"

namespace modeq {

// One simultaneous-vanishing quantity (delta-n-j)_{i-j} B_{n+i,n+j}, or the resonant delta*gamma^{1/2}.
struct SvcEntry {
  int i = 0;
  int j = 0;
  QSqrt3 value;
  bool is_zero = true;
  bool resonant = false;
};

// Rung offsets of F_0 and F_1 when both lie in the pattern and n is an integer.
inline std::optional<std::pair<int, int>> resonant_rungs(const SeriesSpec& spec) {
  if (!spec.n.is_integer() || spec.n.sign() > 0) return std::nullopt;
  long j = (-spec.n).to_long();
  if (j + 1 > spec.l - 1) return std::nullopt;
  int jj = static_cast<int>(j);
  if (!spec.contains(jj) || !spec.contains(jj + 1)) return std::nullopt;
  return std::make_pair(jj + 1, jj);
}

inline QSqrt3 svc_value(const SeriesSpec& spec, int i, int j, const DensityPair& p) {
  Rational lower = spec.n + Rational(j);
  return QSqrt3(pochhammer(p.delta() - lower, i - j)) * B_eval(lower, i - j, p);
}

inline QSqrt3 resonant_value(const DensityPair& p) { return QSqrt3(p.delta()) * p.gamma_half(); }

inline std::vector<SvcEntry> svc_profile(const SeriesSpec& spec, const DensityPair& p, bool with_resonant = true) {
  std::vector<SvcEntry> out;
  for (int i : spec.pattern)
    for (int j : spec.pattern) {
      int gap = i - j;
      if (gap < 2 || gap > 4) continue;
      QSqrt3 v = svc_value(spec, i, j, p);
      out.push_back({i, j, v, v.is_zero(), false});
    }
  if (with_resonant) {
    if (auto rr = resonant_rungs(spec)) {
      QSqrt3 v = resonant_value(p);
      out.push_back({rr->first, rr->second, v, v.is_zero(), true});
    }
  }
  return out;
}

enum class InvariantKind { I, J, K, M, R, Itilde, Jtilde, Mtilde, Rtilde, GeneralRatio };

inline std::string to_string(InvariantKind k) {
  switch (k) {
    case InvariantKind::I: return "I";
    case InvariantKind::J: return "J";
    case InvariantKind::K: return "K";
    case InvariantKind::M: return "M";
    case InvariantKind::R: return "R";
    case InvariantKind::Itilde: return "Itilde";
    case InvariantKind::Jtilde: return "Jtilde";
    case InvariantKind::Mtilde: return "Mtilde";
    case InvariantKind::Rtilde: return "Rtilde";
    case InvariantKind::GeneralRatio: return "GeneralRatio";
  }
  return "?";
}

inline std::optional<InvariantKind> invariant_kind_from_string(const std::string& s) {
  for (auto k : {InvariantKind::I, InvariantKind::J, InvariantKind::K, InvariantKind::M, InvariantKind::R,
                 InvariantKind::Itilde, InvariantKind::Jtilde, InvariantKind::Mtilde, InvariantKind::Rtilde})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

// An exact value, or nullopt when the defining denominator vanishes.
struct InvariantValue {
  InvariantKind kind;
  std::optional<QSqrt3> value;
  bool defined() const { return value.has_value(); }
};

// A quotient of two polynomials in (g, d).
struct RatioForm {
  GDPoly num;
  GDPoly den;
};

enum class AuxKind { B420, B4310, Bminus43210, Bplus43210, B5320 };

namespace detail {
// B_{n+i, n+j}
inline GDPoly Bij(const Rational& n, int i, int j) { return B_symbolic(n + Rational(j), i - j); }
}  // namespace detail

inline GDPoly aux_combination(AuxKind kind, const Rational& n) {
  using detail::Bij;
  Rational N5 = N_of(n, 5);
  Rational N6 = N_of(n, 6);
  auto b420 = [&] {
    Rational div = Rational(4) * (N5 * N5 - Rational(1));
    if (div.is_zero()) throw DomainError("B420 needs N5 != +-1");
    return (Bij(n, 4, 0) - Bij(n, 4, 2) * Bij(n, 2, 0)).scaled(QSqrt3(Rational(1) / div));
  };
  auto b4310 = [&] {
    Rational div = N5 * N5 - Rational(9, 4);
    if (div.is_zero()) throw DomainError("B4310 needs N5 != +-3/2");
    return (Bij(n, 4, 0) * Bij(n, 3, 1) - Bij(n, 4, 1) * Bij(n, 3, 0)).scaled(QSqrt3(Rational(1) / div));
  };
  switch (kind) {
    case AuxKind::B420: return b420();
    case AuxKind::B4310: return b4310();
    case AuxKind::Bminus43210: return (b4310() - Bij(n, 3, 1) * b420()).scaled(QSqrt3(5));
    case AuxKind::Bplus43210: return (b4310() + Bij(n, 3, 1) * b420()).scaled(QSqrt3(Rational(1, 2)));
    case AuxKind::B5320: {
      if (N6.is_zero()) throw DomainError("B5320 needs N6 != 0");
      return (Bij(n, 5, 2) * Bij(n, 2, 0) - Bij(n, 5, 3) * Bij(n, 3, 0)).scaled(QSqrt3(Rational(1) / (Rational(6) * N6)));
    }
  }
  throw DomainError("unknown auxiliary combination");
}

// Numerator and denominator of each named invariant.
inline RatioForm invariant_form(InvariantKind kind, const Rational& n) {
  using detail::Bij;
  using gd::g;
  Rational N5 = N_of(n, 5);
  switch (kind) {
    case InvariantKind::I: return {Bij(n, 4, 0), Bij(n, 4, 2) * Bij(n, 2, 0)};
    case InvariantKind::J: return {Bij(n, 4, 0) * Bij(n, 3, 1), Bij(n, 4, 1) * Bij(n, 3, 0)};
    case InvariantKind::K: return {Bij(n, 4, 2) * Bij(n, 3, 1) * Bij(n, 2, 0), Bij(n, 4, 1) * Bij(n, 3, 0)};
    case InvariantKind::M: return {Bij(n, 5, 2) * Bij(n, 2, 0), Bij(n, 5, 3) * Bij(n, 3, 0)};
    case InvariantKind::R:
      return {g() * B_symbolic(Rational(-1), 3), B_symbolic(Rational(0), 2) * B_symbolic(Rational(-1), 2)};
    case InvariantKind::Rtilde: {
      GDPoly gam = gd::gamma();
      return {gam * (gam - GDPoly(3)), gam + GDPoly(1) - gd::d() * gd::d()};
    }
    case InvariantKind::Itilde:
      if (N5 * N5 == Rational(1)) throw DomainError("Itilde needs N5 != +-1");
      return {Bij(n, 4, 2) * Bij(n, 2, 0), aux_combination(AuxKind::B420, n)};
    case InvariantKind::Jtilde:
      if (N5 * N5 == Rational(1) || N5 * N5 == Rational(9, 4)) throw DomainError("Jtilde needs N5 not in {+-1, +-3/2}");
      return {aux_combination(AuxKind::Bplus43210, n), aux_combination(AuxKind::Bminus43210, n)};
    case InvariantKind::Mtilde:
      if (N_of(n, 6).is_zero()) throw DomainError("Mtilde needs N6 != 0");
      return {Bij(n, 5, 2) * Bij(n, 2, 0), aux_combination(AuxKind::B5320, n)};
    case InvariantKind::GeneralRatio: break;
  }
  throw DomainError("GeneralRatio has no fixed form; use general_ratio");
}

inline std::optional<QSqrt3> evaluate_ratio(const RatioForm& f, const DensityPair& p) {
  QSqrt3 den = gd::eval(f.den, p.gamma_half(), QSqrt3(p.delta()));
  if (den.is_zero()) return std::nullopt;
  return gd::eval(f.num, p.gamma_half(), QSqrt3(p.delta())) / den;
}

// Same ratio at an arbitrary (gamma, delta); odd-odd ratios are made even by multiplying through by g.
inline std::optional<QSqrt3> evaluate_ratio_gamma(const RatioForm& f, const Rational& gamma, const Rational& delta) {
  GDPoly num = f.num, den = f.den;
  if (!gd::is_even(num) || !gd::is_even(den)) {
    num = num * gd::g();
    den = den * gd::g();
  }
  QSqrt3 dv = gd::eval_even(den, gamma, QSqrt3(delta));
  if (dv.is_zero()) return std::nullopt;
  return gd::eval_even(num, gamma, QSqrt3(delta)) / dv;
}

inline InvariantValue invariant(InvariantKind kind, const Rational& n, const DensityPair& p) {
  return {kind, evaluate_ratio(invariant_form(kind, n), p)};
}

inline InvariantValue invariant_gamma(InvariantKind kind, const Rational& n, const Rational& gamma, const Rational& delta) {
  return {kind, evaluate_ratio_gamma(invariant_form(kind, n), gamma, delta)};
}

// (x1 B41 B30 + x2 B40 B31 + x3 B42 B31 B20) / (same with y).
inline InvariantValue general_ratio(const std::array<QSqrt3, 3>& x, const std::array<QSqrt3, 3>& y, const Rational& n,
                                    const DensityPair& p) {
  bool dependent = true;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (!(x[a] * y[b] - x[b] * y[a]).is_zero()) dependent = false;
  if (dependent) throw DomainError("general_ratio needs linearly independent x and y");
  auto at = [&](int i, int j) { return B_eval(n + Rational(j), i - j, p); };
  std::array<QSqrt3, 3> basis = {at(4, 1) * at(3, 0), at(4, 0) * at(3, 1), at(4, 2) * at(3, 1) * at(2, 0)};
  QSqrt3 num, den;
  for (int k = 0; k < 3; ++k) {
    num += x[k] * basis[k];
    den += y[k] * basis[k];
  }
  if (den.is_zero()) return {InvariantKind::GeneralRatio, std::nullopt};
  return {InvariantKind::GeneralRatio, num / den};
}

}  // namespace modeq
