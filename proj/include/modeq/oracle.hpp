#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modeq/coefficients.hpp"

namespace modeq {

struct ResonantInput : Error {
  using Error::Error;
};
struct TruncationTooSmall : Error {
  using Error::Error;
};
struct ProportionalityViolated : Error {
  using Error::Error;
};
struct WeightMismatch : Error {
  using Error::Error;
};

// The vector field x^p d/dx. p = 0, 1, 2 span the projective subalgebra.
struct VecFieldGen {
  int p = 0;
  static VecFieldGen cochain_index(int r) { return {r + 1}; }  // x^{r+1} d/dx
};

// Dense matrix over Q.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), v_(rows * cols) {}

  static RMatrix identity(std::size_t n) {
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

  std::vector<Rational> column(std::size_t c) const {
    std::vector<Rational> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }
  void set_column(std::size_t c, const std::vector<Rational>& x) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = x[r];
  }

  std::vector<Rational> apply(const std::vector<Rational>& x) const {
    std::vector<Rational> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (!x[c].is_zero() && !(*this)(r, c).is_zero()) out[r] += (*this)(r, c) * x[c];
    return out;
  }

  friend RMatrix operator*(const RMatrix& a, const RMatrix& b) {
    RMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) out(i, j) += x * b(k, j);
      }
    return out;
  }
  friend bool operator==(const RMatrix& a, const RMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.v_ == b.v_;
  }

  bool is_zero() const {
    for (const auto& x : v_)
      if (!x.is_zero()) return false;
    return true;
  }

  // Reduced row echelon form in place; returns pivot columns.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t piv = rows_;
      for (std::size_t r = row; r < rows_; ++r)
        if (!(*this)(r, col).is_zero()) { piv = r; break; }
      if (piv == rows_) continue;
      if (piv != row)
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(piv, c), (*this)(row, c));
      Rational inv = Rational(1) / (*this)(row, col);
      for (std::size_t c = col; c < cols_; ++c) (*this)(row, c) *= inv;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == row || (*this)(r, col).is_zero()) continue;
        Rational f = (*this)(r, col);
        for (std::size_t c = col; c < cols_; ++c)
          if (!(*this)(row, c).is_zero()) (*this)(r, c) -= f * (*this)(row, c);
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  RMatrix inverse() const {
    if (rows_ != cols_) throw Error("inverse of non-square matrix");
    RMatrix aug(rows_, 2 * cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
      aug(r, cols_ + r) = Rational(1);
    }
    auto piv = aug.rref();
    if (piv.size() < rows_ || piv[rows_ - 1] >= cols_) throw Error("singular matrix");
    RMatrix out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = aug(r, cols_ + c);
    return out;
  }

  // Basis of the right null space.
  std::vector<std::vector<Rational>> nullspace() const {
    RMatrix m = *this;
    auto piv = m.rref();
    std::vector<bool> is_piv(cols_, false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_piv[free]) continue;
      std::vector<Rational> v(cols_);
      v[free] = Rational(1);
      for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -m(k, free);
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> v_;
};

// Shape of a truncated symbol space: levels 0..depth-1 below top order k, degrees 0..degree.
struct SymbolSpace {
  DensityPair params;
  Rational k;
  int depth = 1;
  int degree = 0;

  std::size_t dim() const { return static_cast<std::size_t>(depth) * (degree + 1); }
  std::size_t index(int level, int a) const { return static_cast<std::size_t>(level) * (degree + 1) + a; }
  Rational n() const { return params.delta() - k; }
  friend bool operator==(const SymbolSpace& a, const SymbolSpace& b) {
    return a.params == b.params && a.k == b.k && a.depth == b.depth && a.degree == b.degree;
  }
};

// dx^delta sum_i f_i(x) d^{k-i}, f_i polynomials of degree <= D.
class TruncatedSymbol {
 public:
  explicit TruncatedSymbol(SymbolSpace s) : space_(std::move(s)), c_(space_.dim()) {}
  TruncatedSymbol(SymbolSpace s, std::vector<Rational> coeffs) : space_(std::move(s)), c_(std::move(coeffs)) {
    if (c_.size() != space_.dim()) throw Error("coefficient table has wrong size");
  }

  static TruncatedSymbol basis(const SymbolSpace& s, int level, int a) {
    TruncatedSymbol t(s);
    t.at(level, a) = Rational(1);
    return t;
  }

  const SymbolSpace& space() const { return space_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational& at(int level, int a) { return c_[space_.index(level, a)]; }
  const Rational& at(int level, int a) const { return c_[space_.index(level, a)]; }

  // Adds v at (level, a), dropping anything outside the window.
  void accumulate(int level, int a, const Rational& v) {
    if (level < 0 || level >= space_.depth || a < 0 || a > space_.degree || v.is_zero()) return;
    at(level, a) += v;
  }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }

  TruncatedSymbol& operator+=(const TruncatedSymbol& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TruncatedSymbol& operator-=(const TruncatedSymbol& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  TruncatedSymbol scaled(const Rational& s) const {
    TruncatedSymbol t = *this;
    for (auto& x : t.c_) x *= s;
    return t;
  }
  friend TruncatedSymbol operator+(TruncatedSymbol a, const TruncatedSymbol& b) { return a += b; }
  friend TruncatedSymbol operator-(TruncatedSymbol a, const TruncatedSymbol& b) { return a -= b; }
  friend bool operator==(const TruncatedSymbol& a, const TruncatedSymbol& b) {
    return a.space_ == b.space_ && a.c_ == b.c_;
  }

 private:
  SymbolSpace space_;
  std::vector<Rational> c_;
};

// L(x^p d)(dx^delta f d^r) = (g f' + (delta-r) g' f) d^r - f sum_s C(r,s)(lambda + (r-s)/(s+1)) g^{(s+1)} d^{r-s}
inline TruncatedSymbol lie_action(const VecFieldGen& gen, const TruncatedSymbol& t) {
  const SymbolSpace& sp = t.space();
  TruncatedSymbol out(sp);
  const int p = gen.p;
  const Rational delta = sp.params.delta();
  const Rational& lambda = sp.params.lambda;
  for (int i = 0; i < sp.depth; ++i) {
    Rational r = sp.k - Rational(i);
    for (int a = 0; a <= sp.degree; ++a) {
      const Rational& f = t.at(i, a);
      if (f.is_zero()) continue;
      out.accumulate(i, a + p - 1, (Rational(a) + (delta - r) * Rational(p)) * f);
      for (int s = 1; s <= p - 1; ++s) {
        Rational coef = gen_binomial(r, s) * (lambda + (r - Rational(s)) / Rational(s + 1)) *
                        pochhammer(Rational(p), s + 1);
        out.accumulate(i + s, a + p - s - 1, -coef * f);
      }
    }
  }
  return out;
}

// L_nu(x^p d)(dx^nu x^a) = (a + nu p) x^{a+p-1}; returns the coefficient vector up to degree D.
inline std::vector<Rational> density_action(const Rational& nu, const VecFieldGen& gen, int a, int D) {
  if (a > D) throw DomainError("density_action: degree above window");
  std::vector<Rational> out(D + 1);
  int e = a + gen.p - 1;
  if (e >= 0 && e <= D) out[e] = Rational(a) + nu * Rational(gen.p);
  return out;
}

// Q = (x d)^2 - (x d) - (x^2 d)(d)
inline TruncatedSymbol casimir(const TruncatedSymbol& t) {
  TruncatedSymbol xd = lie_action({1}, t);
  return lie_action({1}, xd) - xd - lie_action({2}, lie_action({0}, t));
}

// Operator matrix on the whole window, column j = image of basis vector j.
template <class F>
RMatrix operator_matrix(const SymbolSpace& sp, F&& op) {
  RMatrix m(sp.dim(), sp.dim());
  for (int i = 0; i < sp.depth; ++i)
    for (int a = 0; a <= sp.degree; ++a) m.set_column(sp.index(i, a), op(TruncatedSymbol::basis(sp, i, a)).coeffs());
  return m;
}

inline SymbolSpace quotient_space(const SeriesSpec& spec, const DensityPair& p, int D) {
  if (!spec.is_full()) throw DomainError("oracle handles full patterns only");
  return {p, p.delta() - spec.n, spec.l, D};
}

// Casimir eigenvalues (n+i)(n+i-1) must be distinct.
inline void require_nonresonant(const SeriesSpec& spec) {
  for (int i = 0; i < spec.l; ++i)
    for (int j = i + 1; j < spec.l; ++j) {
      Rational a = spec.n + Rational(i), b = spec.n + Rational(j);
      if (a * (a - Rational(1)) == b * (b - Rational(1)))
        throw ResonantInput("resonant series: n = " + spec.n.str() + ", l = " + std::to_string(spec.l));
    }
}

// Projective quantization on the window: rows are symbol coordinates, columns are density coordinates.
struct ProjectiveQuantization {
  SymbolSpace space;
  RMatrix pq;
  RMatrix pq_inverse;
};

namespace detail {

inline void check_pq_equivariance(const SymbolSpace& sp, const RMatrix& pq) {
  for (int p = 0; p <= 2; ++p) {
    VecFieldGen X{p};
    for (int j = 0; j < sp.depth; ++j) {
      Rational nu = sp.n() + Rational(j);
      for (int b = 0; b <= sp.degree && b + p - 1 <= sp.degree; ++b) {
        TruncatedSymbol lifted(sp, pq.column(sp.index(j, b)));
        auto lhs = lie_action(X, lifted).coeffs();
        auto dens = density_action(nu, X, b, sp.degree);
        std::vector<Rational> rhs(sp.dim());
        for (int e = 0; e <= sp.degree; ++e)
          if (!dens[e].is_zero()) {
            auto col = pq.column(sp.index(j, e));
            for (std::size_t r = 0; r < col.size(); ++r) rhs[r] += dens[e] * col[r];
          }
        if (lhs != rhs) throw Error("projective quantization failed sl2 equivariance");
      }
    }
  }
}

}  // namespace detail

// Each naive lift is corrected level by level into the Casimir eigenspace of its own level.
inline ProjectiveQuantization build_pq(const SeriesSpec& spec, const DensityPair& p, int D) {
  require_nonresonant(spec);
  if (D < 1) throw TruncationTooSmall("degree window must be at least 1");
  SymbolSpace sp = quotient_space(spec, p, D);
  RMatrix Q = operator_matrix(sp, [](const TruncatedSymbol& t) { return casimir(t); });
  auto theta = [&](int i) {
    Rational nu = spec.n + Rational(i);
    return nu * (nu - Rational(1));
  };
  RMatrix pq(sp.dim(), sp.dim());
  for (int i = 0; i < sp.depth; ++i)
    for (int b = 0; b <= D; ++b) {
      std::vector<Rational> v(sp.dim());
      v[sp.index(i, b)] = Rational(1);
      for (int i2 = i + 1; i2 < sp.depth; ++i2) {
        int a2 = b + i - i2;
        if (a2 < 0) break;
        Rational acc;
        for (int i3 = i; i3 < i2; ++i3) {
          int a3 = b + i - i3;
          const Rational& q = Q(sp.index(i2, a2), sp.index(i3, a3));
          if (!q.is_zero()) acc += q * v[sp.index(i3, a3)];
        }
        v[sp.index(i2, a2)] = -acc / (theta(i2) - theta(i));
      }
      pq.set_column(sp.index(i, b), v);
    }
  detail::check_pq_equivariance(sp, pq);
  return {sp, pq, pq.inverse()};
}

// Independent construction: solve d- and x^2 d-equivariance for the unknown lower corrections.
inline RMatrix build_pq_linear(const SeriesSpec& spec, const DensityPair& p, int D) {
  require_nonresonant(spec);
  SymbolSpace sp = quotient_space(spec, p, D);
  // unknown (row (i2,a2), column (i,b)) with i2 > i, a2 = b + i - i2 >= 0
  std::vector<std::vector<int>> unknown(sp.dim(), std::vector<int>(sp.dim(), -1));
  int nunk = 0;
  for (int i = 0; i < sp.depth; ++i)
    for (int b = 0; b <= D; ++b)
      for (int i2 = i + 1; i2 < sp.depth && b + i - i2 >= 0; ++i2)
        unknown[sp.index(i2, b + i - i2)][sp.index(i, b)] = nunk++;
  RMatrix L0 = operator_matrix(sp, [](const TruncatedSymbol& t) { return lie_action({0}, t); });
  RMatrix L2 = operator_matrix(sp, [](const TruncatedSymbol& t) { return lie_action({2}, t); });
  // Column (i,b) of PQ as affine expression: constant e_(i,b) plus unknowns.
  std::vector<std::vector<Rational>> rows;
  auto add_equations = [&](const RMatrix& L, int p_gen) {
    for (int i = 0; i < sp.depth; ++i) {
      Rational nu = sp.n() + Rational(i);
      for (int b = 0; b <= D; ++b) {
        int e = b + p_gen - 1;
        if (e > D) continue;
        Rational scal = Rational(b) + nu * Rational(p_gen);
        std::size_t col = sp.index(i, b);
        // L * PQ[:,col] - scal * PQ[:, (i,e)] = 0, row by row
        for (std::size_t r = 0; r < sp.dim(); ++r) {
          std::vector<Rational> eq(nunk + 1);
          for (std::size_t k = 0; k < sp.dim(); ++k) {
            const Rational& lk = L(r, k);
            if (lk.is_zero()) continue;
            if (k == col) eq[nunk] += lk;
            else if (unknown[k][col] >= 0) eq[unknown[k][col]] += lk;
          }
          if (e >= 0 && !scal.is_zero()) {
            std::size_t col2 = sp.index(i, e);
            if (r == col2) eq[nunk] -= scal;
            else if (unknown[r][col2] >= 0) eq[unknown[r][col2]] -= scal;
          }
          bool nonzero = false;
          for (const auto& x : eq) nonzero = nonzero || !x.is_zero();
          if (nonzero) rows.push_back(std::move(eq));
        }
      }
    }
  };
  add_equations(L0, 0);
  add_equations(L2, 2);
  RMatrix sys(rows.size(), nunk + 1);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c <= nunk; ++c) sys(r, c) = rows[r][c];
  auto piv = sys.rref();
  if (!piv.empty() && piv.back() == static_cast<std::size_t>(nunk)) throw Error("equivariance system inconsistent");
  if (static_cast<int>(piv.size()) < nunk) throw TruncationTooSmall("equivariance system underdetermined; raise D");
  RMatrix pq = RMatrix::identity(sp.dim());
  for (std::size_t r = 0; r < sp.dim(); ++r)
    for (std::size_t c = 0; c < sp.dim(); ++c)
      if (unknown[r][c] >= 0) pq(r, c) = -sys(unknown[r][c], nunk);
  return pq;
}

// pi(X) = PQ^{-1} L(X) PQ. Columns whose image leaves the window are left zero and flagged.
struct PiMatrix {
  RMatrix m;
  std::vector<bool> valid_column;
};

inline PiMatrix pi_matrix(const ProjectiveQuantization& q, const VecFieldGen& X) {
  const SymbolSpace& sp = q.space;
  PiMatrix out{RMatrix(sp.dim(), sp.dim()), std::vector<bool>(sp.dim(), false)};
  for (int j = 0; j < sp.depth; ++j)
    for (int b = 0; b <= sp.degree && b + X.p - 1 <= sp.degree; ++b) {
      std::size_t col = sp.index(j, b);
      TruncatedSymbol lifted(sp, q.pq.column(col));
      out.m.set_column(col, q.pq_inverse.apply(lie_action(X, lifted).coeffs()));
      out.valid_column[col] = true;
    }
  return out;
}

// beta_{src,tgt}(x^{r+1} d) = 6/(r-2)! L(x^2 d)^{r-2}(dx^delta d^{delta-2}) as a map on monomials x^0..x^D.
inline RMatrix beta_eval(const Rational& nu_src, const Rational& nu_tgt, const VecFieldGen& gen, int D) {
  Rational dl = nu_tgt - nu_src;
  if (!dl.is_integer() || dl < Rational(2)) throw DomainError("beta_eval needs nu_tgt - nu_src in 2 + N");
  RMatrix out(D + 1, D + 1);
  if (gen.p <= 2) return out;  // a-relative
  int delta = static_cast<int>(dl.to_long());
  int r = gen.p - 1;
  SymbolSpace sp{{nu_src, nu_tgt}, Rational(delta - 2), delta - 1, r};
  TruncatedSymbol t = TruncatedSymbol::basis(sp, 0, 0);
  for (int s = 0; s < r - 2; ++s) t = lie_action({2}, t);
  t = t.scaled(Rational(6) / factorial(r - 2));
  for (int b = 0; b <= D; ++b)
    for (int lev = 0; lev < sp.depth; ++lev) {
      int order = delta - 2 - lev;
      for (int a = 0; a <= sp.degree; ++a) {
        const Rational& f = t.at(lev, a);
        if (f.is_zero() || b < order) continue;
        int e = a + b - order;
        if (e > D) continue;
        out(e, b) += f * pochhammer(Rational(b), order);
      }
    }
  return out;
}

struct RecoveredB {
  QSqrt3 value;
  int samples = 0;  // nonzero beta entries compared
};

// Recover b_{n+i,n+j} from pi entries; asserts proportionality and pi_{j+1,j} = 0.
inline RecoveredB recover_b(const ProjectiveQuantization& q, int i, int j, int P = 6) {
  const SymbolSpace& sp = q.space;
  if (i - j < 2 || i >= sp.depth || j < 0) throw DomainError("recover_b needs 0 <= j, j+2 <= i < l");
  Rational n = sp.n();
  std::optional<Rational> ratio;
  int samples = 0;
  for (int p = 3; p <= P; ++p) {
    VecFieldGen X{p};
    PiMatrix pi = pi_matrix(q, X);
    RMatrix beta = beta_eval(n + Rational(j), n + Rational(i), X, sp.degree);
    for (int b = 0; b <= sp.degree; ++b) {
      std::size_t col = sp.index(j, b);
      if (!pi.valid_column[col]) continue;
      for (int e = 0; e <= sp.degree; ++e) {
        if (j + 1 < sp.depth && !pi.m(sp.index(j + 1, e), col).is_zero())
          throw ProportionalityViolated("pi_{j+1,j} is nonzero");
        const Rational& entry = pi.m(sp.index(i, e), col);
        const Rational& bt = beta(e, b);
        if (bt.is_zero()) {
          if (!entry.is_zero()) throw ProportionalityViolated("pi entry where beta vanishes");
          continue;
        }
        Rational rr = entry / bt;
        if (ratio && *ratio != rr) throw ProportionalityViolated("pi block not proportional to beta");
        ratio = rr;
        ++samples;
      }
    }
  }
  if (!ratio) throw TruncationTooSmall("no nonzero beta entry inside the window");
  return {QSqrt3(*ratio), samples};
}

inline RecoveredB recover_b(const SeriesSpec& spec, const DensityPair& p, int i, int j, int D = 8, int P = 6) {
  return recover_b(build_pq(spec, p, D), i, j, P);
}

// Scalars eps_0..eps_{l-1}, all nonzero, with eps pi_A(X) = pi_B(X) eps for all generators up to P.
inline std::optional<std::vector<Rational>> brute_force_intertwiner(const SeriesSpec& spec, const DensityPair& pA,
                                                                    const DensityPair& pB, int D = 8, int P = 6) {
  auto qa = build_pq(spec, pA, D);
  auto qb = build_pq(spec, pB, D);
  const SymbolSpace& sp = qa.space;
  const int l = spec.l;
  std::vector<std::vector<Rational>> eqs;
  for (int p = 0; p <= P; ++p) {
    VecFieldGen X{p};
    PiMatrix a = pi_matrix(qa, X), b = pi_matrix(qb, X);
    for (int j = 0; j < l; ++j)
      for (int bb = 0; bb <= D; ++bb) {
        std::size_t col = sp.index(j, bb);
        if (!a.valid_column[col]) continue;
        for (int i = j; i < l; ++i)
          for (int e = 0; e <= D; ++e) {
            std::size_t row = sp.index(i, e);
            std::vector<Rational> eq(l);
            eq[i] += a.m(row, col);
            eq[j] -= b.m(row, col);
            bool nz = false;
            for (const auto& x : eq) nz = nz || !x.is_zero();
            if (nz) eqs.push_back(std::move(eq));
          }
      }
  }
  RMatrix sys(eqs.size(), l);
  for (std::size_t r = 0; r < eqs.size(); ++r)
    for (int c = 0; c < l; ++c) sys(r, c) = eqs[r][c];
  auto basis = sys.nullspace();
  if (basis.empty()) return std::nullopt;
  for (int c = 0; c < l; ++c) {
    bool any = false;
    for (const auto& v : basis) any = any || !v[c].is_zero();
    if (!any) return std::nullopt;
  }
  // Some combination sum t^k v_k has no zero coordinate; each coordinate rules out finitely many t.
  for (long t = 1;; ++t) {
    std::vector<Rational> eps(l);
    Rational w(1);
    for (const auto& v : basis) {
      for (int c = 0; c < l; ++c) eps[c] += w * v[c];
      w *= Rational(t);
    }
    bool ok = true;
    for (const auto& x : eps) ok = ok && !x.is_zero();
    if (ok) {
      Rational s = Rational(1) / eps[0];
      for (auto& x : eps) x *= s;
      return eps;
    }
  }
}

// Adjoint into Psi_{1-mu,1-lambda}; global phase e^{pi i k} dropped, relative sign (-1)^level kept.
inline TruncatedSymbol conjugate_symbol(const TruncatedSymbol& t) {
  const SymbolSpace& sp = t.space();
  SymbolSpace target{sp.params.conjugate(), sp.k, sp.depth, sp.degree};
  TruncatedSymbol out(target);
  for (int i = 0; i < sp.depth; ++i) {
    Rational r = sp.k - Rational(i);
    Rational sign = (i % 2) ? Rational(-1) : Rational(1);
    for (int a = 0; a <= sp.degree; ++a) {
      const Rational& f = t.at(i, a);
      if (f.is_zero()) continue;
      for (int s = 0; s <= a && i + s < sp.depth; ++s)
        out.accumulate(i + s, a - s, sign * gen_binomial(r, s) * pochhammer(Rational(a), s) * f);
    }
  }
  return out;
}

enum class Side { Left, Right };

// Left: d o T for T in Psi^k_{lambda,0}. Right: T o d for T in Psi^k_{1,mu}.
inline TruncatedSymbol de_rham_compose(Side side, const TruncatedSymbol& t) {
  const SymbolSpace& sp = t.space();
  if (side == Side::Left) {
    if (!sp.params.mu.is_zero()) throw WeightMismatch("left de Rham composition needs mu = 0");
    SymbolSpace target{{sp.params.lambda, Rational(1)}, sp.k + Rational(1), sp.depth, sp.degree};
    TruncatedSymbol out(target);
    for (int i = 0; i < sp.depth; ++i)
      for (int a = 0; a <= sp.degree; ++a) {
        const Rational& f = t.at(i, a);
        if (f.is_zero()) continue;
        out.accumulate(i, a, f);
        if (a > 0) out.accumulate(i + 1, a - 1, Rational(a) * f);
      }
    return out;
  }
  if (sp.params.lambda != Rational(1)) throw WeightMismatch("right de Rham composition needs lambda = 1");
  SymbolSpace target{{Rational(0), sp.params.mu}, sp.k + Rational(1), sp.depth, sp.degree};
  return TruncatedSymbol(target, t.coeffs());
}

}  // namespace modeq
