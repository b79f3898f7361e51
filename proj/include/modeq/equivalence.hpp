#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modeq/invariants.hpp"

namespace modeq {

struct SpecMismatch : Error {
  using Error::Error;
};
struct UnsupportedPattern : Error {
  using Error::Error;
};
struct ExcludedN : Error {
  using Error::Error;
};

enum class ResonanceClass { NonResonant, IntegralResonant, HalfIntegralResonant };

inline std::string to_string(ResonanceClass r) {
  switch (r) {
    case ResonanceClass::NonResonant: return "NonResonant";
    case ResonanceClass::IntegralResonant: return "IntegralResonant";
    case ResonanceClass::HalfIntegralResonant: return "HalfIntegralResonant";
  }
  return "?";
}

// Resonant iff n lies in {0, -1/2, ..., 2-l}; l is the spanning length.
inline ResonanceClass resonance_class(const Rational& n, int l) {
  if (!n.is_half_integer() || n.sign() > 0 || n < Rational(2 - l)) return ResonanceClass::NonResonant;
  return n.is_integer() ? ResonanceClass::IntegralResonant : ResonanceClass::HalfIntegralResonant;
}
inline ResonanceClass resonance_class(const SeriesSpec& s) { return resonance_class(s.n, s.l); }

// c * eps_i = c' * eps_j
struct Edge {
  int i = 0;
  int j = 0;
  QSqrt3 c;
  QSqrt3 c_prime;
  bool resonant = false;
  bool infeasible() const { return c.is_zero() != c_prime.is_zero(); }
};

struct ConstraintGraph {
  std::vector<int> nodes;
  std::vector<Edge> edges;
};

namespace detail {
// Gap >= 5 pairs never constrain eps unless they hit the rational Feigin-Fuchs exceptions.
inline void assert_no_cocycle_pair(const SeriesSpec& spec) {
  for (int i : spec.pattern)
    for (int j : spec.pattern) {
      if (i - j < 5) continue;
      Rational ni = spec.n + Rational(i), nj = spec.n + Rational(j);
      if ((ni == Rational(1) && nj == Rational(-4)) || (ni == Rational(5) && nj == Rational(0)))
        throw Error("exceptional cocycle pair reached at n = " + spec.n.str());
    }
}
}  // namespace detail

inline ConstraintGraph build_constraints(const SeriesSpec& spec, const DensityPair& a, const DensityPair& b,
                                         bool with_resonant = true) {
  detail::assert_no_cocycle_pair(spec);
  ConstraintGraph g{spec.pattern, {}};
  auto pa = svc_profile(spec, a, with_resonant);
  auto pb = svc_profile(spec, b, with_resonant);
  for (std::size_t k = 0; k < pa.size(); ++k) g.edges.push_back({pa[k].i, pa[k].j, pa[k].value, pb[k].value, pa[k].resonant});
  return g;
}

// A violated condition: an SVC entry, a ratio conflict, or an invariant mismatch.
struct FailingCondition {
  enum class Kind { Svc, Ratio, Invariant };
  Kind kind = Kind::Svc;
  int i = 0;
  int j = 0;
  QSqrt3 value_a;
  QSqrt3 value_b;
  std::optional<std::string> invariant;
};

inline std::string to_string(FailingCondition::Kind k) {
  switch (k) {
    case FailingCondition::Kind::Svc: return "svc";
    case FailingCondition::Kind::Ratio: return "ratio";
    case FailingCondition::Kind::Invariant: return "invariant";
  }
  return "?";
}

struct Equivalent {
  std::map<int, QSqrt3> witness;
  bool zeta_used = false;
};
struct Inequivalent {
  FailingCondition failing;
};
struct Unsupported {
  std::string reason;
};

struct Verdict {
  std::variant<Equivalent, Inequivalent, Unsupported> outcome;

  bool equivalent() const { return std::holds_alternative<Equivalent>(outcome); }
  bool inequivalent() const { return std::holds_alternative<Inequivalent>(outcome); }
  bool unsupported() const { return std::holds_alternative<Unsupported>(outcome); }
  std::string name() const {
    return equivalent() ? "Equivalent" : inequivalent() ? "Inequivalent" : "Unsupported";
  }
};

using EpsilonResult = std::variant<std::map<int, QSqrt3>, FailingCondition>;

// Union-find where each node carries its ratio to the root.
inline EpsilonResult epsilon_solve_detailed(const ConstraintGraph& g) {
  for (const auto& e : g.edges)
    if (e.infeasible()) return FailingCondition{FailingCondition::Kind::Svc, e.i, e.j, e.c, e.c_prime, std::nullopt};
  std::map<int, int> parent;
  std::map<int, QSqrt3> ratio;  // eps_x = ratio[x] * eps_parent[x]
  for (int v : g.nodes) {
    parent[v] = v;
    ratio[v] = QSqrt3(1);
  }
  auto find = [&](int x) {
    QSqrt3 acc(1);
    while (parent[x] != x) {
      acc = acc * ratio[x];
      x = parent[x];
    }
    return std::make_pair(x, acc);
  };
  for (const auto& e : g.edges) {
    if (e.c.is_zero()) continue;
    QSqrt3 want = e.c_prime / e.c;  // eps_i / eps_j
    auto [ri, wi] = find(e.i);
    auto [rj, wj] = find(e.j);
    if (ri == rj) {
      if (wi / wj != want)
        return FailingCondition{FailingCondition::Kind::Ratio, e.i, e.j, e.c, e.c_prime, std::nullopt};
      continue;
    }
    // eps_ri = (want * wj / wi) eps_rj
    parent[ri] = rj;
    ratio[ri] = want * wj / wi;
  }
  std::map<int, QSqrt3> eps;
  for (int v : g.nodes) eps[v] = find(v).second;
  // normalise each component so its smallest offset carries 1
  std::map<int, QSqrt3> scale;
  for (int v : g.nodes) {
    int root = find(v).first;
    if (!scale.count(root)) scale[root] = eps[v];
  }
  for (int v : g.nodes) eps[v] = eps[v] / scale[find(v).first];
  return eps;
}

inline std::optional<std::map<int, QSqrt3>> epsilon_solve(const ConstraintGraph& g) {
  auto r = epsilon_solve_detailed(g);
  if (auto* w = std::get_if<std::map<int, QSqrt3>>(&r)) return *w;
  return std::nullopt;
}

inline bool witness_satisfies(const ConstraintGraph& g, const std::map<int, QSqrt3>& eps) {
  for (const auto& [k, v] : eps)
    if (v.is_zero()) return false;
  for (const auto& e : g.edges)
    if (e.c * eps.at(e.i) != e.c_prime * eps.at(e.j)) return false;
  return true;
}

namespace detail {

inline Verdict from_solver(const ConstraintGraph& g, bool zeta_used = false) {
  auto r = epsilon_solve_detailed(g);
  if (auto* w = std::get_if<std::map<int, QSqrt3>>(&r)) return {Equivalent{*w, zeta_used}};
  return {Inequivalent{std::get<FailingCondition>(r)}};
}

inline std::optional<FailingCondition> svc_failure(const std::vector<Edge>& edges) {
  for (const auto& e : edges)
    if (e.infeasible()) return FailingCondition{FailingCondition::Kind::Svc, e.i, e.j, e.c, e.c_prime, std::nullopt};
  return std::nullopt;
}

inline Edge edge_at(const ConstraintGraph& g, int i, int j, bool resonant = false) {
  for (const auto& e : g.edges)
    if (e.i == i && e.j == j && e.resonant == resonant) return e;
  throw Error("missing constraint edge");
}

// Length 4 at n = 0 (top = 3, bottom = 1) or its dual n = -2.
inline Verdict decide_res4_integral(const SeriesSpec& spec, const DensityPair& a, const DensityPair& b) {
  ConstraintGraph full = build_constraints(spec, a, b);
  bool n0 = spec.n.is_zero();
  Edge res = edge_at(full, n0 ? 1 : 3, n0 ? 0 : 2, true);
  Edge e20 = edge_at(full, 2, 0), e31 = edge_at(full, 3, 1);
  // the rung pair whose vanishing switches on the extra condition
  const Edge& trigger = n0 ? e31 : e20;
  ConstraintGraph g{spec.pattern, {res, e20, e31}};
  if (auto f = svc_failure(g.edges)) return {Inequivalent{*f}};
  if (!trigger.c.is_zero()) return from_solver(g, true);
  // (delta)_4 g^{1/2} at n = 0, (delta+3)_4 g^{1/2} at n = -2
  Rational shift = n0 ? Rational(0) : Rational(3);
  auto extra = [&](const DensityPair& p) { return QSqrt3(pochhammer(p.delta() + shift, 4)) * p.gamma_half(); };
  g.edges.push_back({3, 0, extra(a), extra(b), false});
  return from_solver(g, false);
}

// Self-dual length 4: SVC of four functions, then R.
inline Verdict decide_res_sd4(const SeriesSpec& spec, const DensityPair& a, const DensityPair& b) {
  ConstraintGraph g = build_constraints(spec, a, b);
  if (auto f = svc_failure(g.edges)) return {Inequivalent{*f}};
  bool any_zero = std::any_of(g.edges.begin(), g.edges.end(), [](const Edge& e) { return e.c.is_zero(); });
  if (!any_zero) {
    auto ra = invariant(InvariantKind::R, spec.n, a).value;
    auto rb = invariant(InvariantKind::R, spec.n, b).value;
    if (!ra || !rb) throw Error("R undefined although no SVC function vanishes");
    if (*ra != *rb)
      return {Inequivalent{FailingCondition{FailingCondition::Kind::Invariant, 3, 1, *ra, *rb, std::string("R")}}};
  }
  Verdict v = from_solver(g);
  if (!v.equivalent()) throw Error("R test and eps-system disagree");
  return v;
}

}  // namespace detail

// Full composition series.
inline Verdict decide(const SeriesSpec& spec, const DensityPair& a, const DensityPair& b);

// Supported lacunary patterns, including the experimental {0,2,3,4,6}.
inline Verdict decide_lacunary(const SeriesSpec& spec, const DensityPair& a, const DensityPair& b,
                               bool allow_experimental = false);

namespace detail {

struct LacunaryRule {
  std::vector<int> pattern;
  std::vector<Rational> excluded;
  bool dual = false;  // decided through the mirrored pattern
  bool experimental = false;
};

inline const std::vector<LacunaryRule>& lacunary_rules() {
  auto R = [](long p, long q = 1) { return Rational(p, q); };
  static const std::vector<LacunaryRule> rules = {
      {{0, 2}, {}, false, false},
      {{0, 2, 3}, {R(-2), R(0)}, false, false},
      {{0, 1, 3}, {R(-2), R(0)}, true, false},
      {{0, 2, 4}, {R(-3), R(-5, 2), R(-1, 2), R(0)}, false, false},
      {{0, 2, 3, 4}, {R(-3), R(-5, 2), R(-1, 2), R(0)}, false, false},
      {{0, 1, 2, 4}, {R(-3), R(-5, 2), R(-1, 2), R(0)}, true, false},
      {{0, 2, 3, 5}, {R(-4), R(-7, 2), R(-3), R(-2), R(-1), R(-1, 2), R(0)}, false, false},
      {{0, 2, 3, 4, 5}, {R(-4), R(-7, 2), R(-3), R(-2), R(-1), R(-1, 2), R(0)}, false, false},
      {{0, 1, 2, 3, 5}, {R(-4), R(-7, 2), R(-3), R(-2), R(-1), R(-1, 2), R(0)}, true, false},
      {{0, 2, 3, 4, 6}, {}, false, true},
  };
  return rules;
}

inline const LacunaryRule* find_lacunary_rule(const std::vector<int>& pattern) {
  for (const auto& r : lacunary_rules())
    if (r.pattern == pattern) return &r;
  return nullptr;
}

}  // namespace detail

// Mirror image under duality: n -> 2-l-n, offsets reversed, (lambda, mu) -> (mu, lambda).
inline SeriesSpec dual_spec(const SeriesSpec& s) {
  std::vector<int> pat;
  for (auto it = s.pattern.rbegin(); it != s.pattern.rend(); ++it) pat.push_back(s.l - 1 - *it);
  return SeriesSpec(Rational(2 - s.l) - s.n, pat);
}

inline Verdict decide_lacunary(const SeriesSpec& spec, const DensityPair& a, const DensityPair& b,
                               bool allow_experimental) {
  const auto* rule = detail::find_lacunary_rule(spec.pattern);
  if (!rule) throw UnsupportedPattern("pattern not treated: lacunary rules cover {0,2}, {0,2,3}, {0,1,3}, {0,2,4}, "
                                      "{0,2,3,4}, {0,1,2,4}, {0,2,3,5}, {0,2,3,4,5}, {0,1,2,3,5}, {0,2,3,4,6}");
  for (const auto& x : rule->excluded)
    if (spec.n == x) throw ExcludedN("n = " + spec.n.str() + " is excluded for this pattern");
  if (rule->experimental) {
    if (!allow_experimental) return {Unsupported{"pattern {0,2,3,4,6} is experimental; enable it explicitly"}};
    if (resonance_class(spec) != ResonanceClass::NonResonant)
      return {Unsupported{"experimental pattern requires n non-resonant for the spanning length"}};
  }
  if (rule->dual) {
    Verdict v = decide_lacunary(dual_spec(spec), a.swapped(), b.swapped(), allow_experimental);
    if (auto* eq = std::get_if<Equivalent>(&v.outcome)) {
      // mirrored edges carry the two sides of each constraint swapped, so the witness inverts
      std::map<int, QSqrt3> w;
      for (const auto& [k, x] : eq->witness) w[spec.l - 1 - k] = x.inverse();
      QSqrt3 s = w.begin()->second;
      for (auto& [k, x] : w) x = x / s;
      eq->witness = w;
    } else if (auto* in = std::get_if<Inequivalent>(&v.outcome)) {
      auto& f = in->failing;
      int i = spec.l - 1 - f.j, j = spec.l - 1 - f.i;
      f.i = i;
      f.j = j;
    }
    return v;
  }
  return detail::from_solver(build_constraints(spec, a, b, false));
}

inline Verdict decide(const SeriesSpec& spec, const DensityPair& a, const DensityPair& b) {
  if (!spec.is_full()) return decide_lacunary(spec, a, b);
  ResonanceClass rc = resonance_class(spec);
  if (rc == ResonanceClass::NonResonant) return detail::from_solver(build_constraints(spec, a, b));
  const Rational& n = spec.n;
  if (spec.l <= 3 || (spec.l == 4 && (n == Rational(-1, 2) || n == Rational(-3, 2))))
    return detail::from_solver(build_constraints(spec, a, b));
  if (spec.l == 4 && (n.is_zero() || n == Rational(-2))) return detail::decide_res4_integral(spec, a, b);
  if (spec.l == 4 && n == Rational(-1)) return detail::decide_res_sd4(spec, a, b);
  if (spec.l == 5 && n == Rational(-3, 2)) return detail::from_solver(build_constraints(spec, a, b));
  return {Unsupported{"resonant length >= 5 is treated only in the self-dual case l = 5, n = -3/2"}};
}

// Both sides must share (n, l, pattern).
inline Verdict decide(const SeriesSpec& sa, const DensityPair& a, const SeriesSpec& sb, const DensityPair& b) {
  if (!(sa == sb)) throw SpecMismatch("composition series differ: n, l and pattern must agree");
  return decide(sa, a, b);
}

// Classes of a finite sample under decide.
inline std::vector<std::vector<DensityPair>> partition(const SeriesSpec& spec, const std::vector<DensityPair>& sample) {
  std::vector<std::vector<DensityPair>> classes;
  for (const auto& p : sample) {
    bool placed = false;
    for (auto& cls : classes)
      if (decide(spec, cls.front(), p).equivalent()) {
        cls.push_back(p);
        placed = true;
        break;
      }
    if (!placed) classes.push_back({p});
  }
  return classes;
}

enum class KnownTable { DO97, GO96, LO99_l3, Ga00_D2, Ga00_D3 };

inline std::string to_string(KnownTable t) {
  switch (t) {
    case KnownTable::DO97: return "DO97";
    case KnownTable::GO96: return "GO96";
    case KnownTable::LO99_l3: return "LO99_l3";
    case KnownTable::Ga00_D2: return "Ga00_D2";
    case KnownTable::Ga00_D3: return "Ga00_D3";
  }
  return "?";
}

inline std::optional<KnownTable> known_table_from_string(const std::string& s) {
  for (auto t : {KnownTable::DO97, KnownTable::GO96, KnownTable::LO99_l3, KnownTable::Ga00_D2, KnownTable::Ga00_D3})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

struct TableResult {
  std::string name;
  SeriesSpec spec;
  std::vector<std::vector<DensityPair>> classes;
};

// Classical classifications regenerated on rational sample grids.
inline TableResult known_tables(KnownTable which) {
  auto R = [](long p, long q = 1) { return Rational(p, q); };
  std::vector<Rational> lambdas = {R(-1), R(0), R(1, 2), R(1), R(2), R(3), R(1, 3), R(2, 3)};
  auto diagonal = [&](const Rational& shift) {
    std::vector<DensityPair> out;
    for (const auto& l : lambdas) out.push_back({l, l + shift});
    return out;
  };
  switch (which) {
    case KnownTable::DO97: {
      SeriesSpec s(R(-2), 3);  // D^2 with lambda = mu
      return {"DO97", s, partition(s, diagonal(R(0)))};
    }
    case KnownTable::GO96: {
      SeriesSpec s(R(-3), 4);  // D^3 with lambda = mu
      return {"GO96", s, partition(s, diagonal(R(0)))};
    }
    case KnownTable::LO99_l3: {
      // k = 13/11: the split roots of 12 lambda(lambda-1) = (k-2)(k+1) are 2/11 and 9/11
      SeriesSpec s(R(-13, 11), 3);
      std::vector<DensityPair> sample = diagonal(R(0));
      sample.push_back({R(2, 11), R(2, 11)});
      sample.push_back({R(9, 11), R(9, 11)});
      return {"LO99_l3", s, partition(s, sample)};
    }
    case KnownTable::Ga00_D2: {
      SeriesSpec s(R(1), 3);  // delta = 3, k = 2
      std::vector<DensityPair> sample = diagonal(R(3));
      sample.push_back({R(-2), R(1)});  // conjugate of (0, 3)
      return {"Ga00_D2", s, partition(s, sample)};
    }
    case KnownTable::Ga00_D3: {
      SeriesSpec s(R(1), 4);  // delta = 4, k = 3
      std::vector<DensityPair> sample = diagonal(R(4));
      sample.push_back({R(-3), R(1)});
      sample.push_back({R(-3, 2), R(5, 2)});  // lambda + mu = 1
      return {"Ga00_D3", s, partition(s, sample)};
    }
  }
  throw DomainError("unknown table");
}

}  // namespace modeq
