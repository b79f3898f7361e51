#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <concepts>
#include <cstddef>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modeq {

// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
  DivisionByZero() : Error("division by zero") {}
};

struct ParseError : Error {
  using Error::Error;
};

// Reduced fraction over GMP integers.
class Rational {
 public:
  Rational() : v_(0) {}

  template <std::integral T>
  Rational(T n) {  // NOLINT: implicit by design
    if constexpr (std::is_signed_v<T>)
      v_ = mpq_class(mpz_class(static_cast<long>(n)));
    else
      v_ = mpq_class(mpz_class(static_cast<unsigned long>(n)));
  }

  Rational(long p, long q) {
    if (q == 0) throw DivisionByZero();
    v_ = mpq_class(mpz_class(p), mpz_class(q));
    v_.canonicalize();
  }

  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p", "p/q", with optional sign; also plain decimals like "6.35".
  static Rational parse(const std::string& text) {
    std::string s;
    for (char ch : text)
      if (ch != ' ') s.push_back(ch);
    if (s.empty()) throw ParseError("empty rational");
    auto valid_int = [](const std::string& t) {
      std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
      if (i >= t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    auto strip_plus = [](std::string t) {
      if (!t.empty() && t[0] == '+') t.erase(0, 1);
      return t;
    };
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
      std::string p = s.substr(0, slash), q = s.substr(slash + 1);
      if (!valid_int(p) || !valid_int(q)) throw ParseError("bad rational: " + text);
      mpz_class den(strip_plus(q));
      if (den == 0) throw ParseError("zero denominator: " + text);
      return Rational(mpq_class(mpz_class(strip_plus(p)), den));
    }
    if (dot != std::string::npos) {
      std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
      bool neg = !ip.empty() && ip[0] == '-';
      std::string digits = ip + fp;
      if (ip.empty() || ip == "-" || ip == "+") digits = (neg ? "-0" : "0") + fp;
      if (!valid_int(digits) || fp.empty()) throw ParseError("bad rational: " + text);
      mpz_class num(strip_plus(digits));
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
      return Rational(mpq_class(num, den));
    }
    if (!valid_int(s)) throw ParseError("bad rational: " + text);
    return Rational(mpq_class(mpz_class(strip_plus(s))));
  }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }
  bool is_half_integer() const { return v_.get_den() == 1 || v_.get_den() == 2; }

  // Throws unless the value is an integer fitting in long.
  long to_long() const {
    if (!is_integer() || !v_.get_num().fits_slong_p()) throw Error("not a machine integer: " + str());
    return v_.get_num().get_si();
  }

  double to_double() const { return v_.get_d(); }

  std::string str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero();
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational pow(const Rational& x, int e) {
  Rational base = e < 0 ? Rational(1) / x : x;
  Rational out(1);
  for (int i = 0; i < (e < 0 ? -e : e); ++i) out *= base;
  return out;
}

inline Rational factorial(long n) {
  if (n < 0) throw Error("factorial of negative integer");
  Rational out(1);
  for (long i = 2; i <= n; ++i) out *= Rational(i);
  return out;
}

// a + b*sqrt(3).
class QSqrt3 {
 public:
  QSqrt3() = default;
  QSqrt3(Rational a) : a_(std::move(a)) {}  // NOLINT: implicit by design
  template <std::integral T>
  QSqrt3(T n) : a_(n) {}  // NOLINT
  QSqrt3(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static QSqrt3 sqrt3() { return {Rational(0), Rational(1)}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }

  // Sign of the real number a + b*sqrt(3).
  int sign() const {
    int sa = a_.sign(), sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    Rational lhs = a_ * a_, rhs = Rational(3) * b_ * b_;
    return lhs > rhs ? sa : sb;
  }

  QSqrt3 conjugate() const { return {a_, -b_}; }
  Rational norm() const { return a_ * a_ - Rational(3) * b_ * b_; }

  QSqrt3 inverse() const {
    if (is_zero()) throw DivisionByZero();
    Rational nrm = norm();
    return {a_ / nrm, -b_ / nrm};
  }

  QSqrt3 operator-() const { return {-a_, -b_}; }
  QSqrt3& operator+=(const QSqrt3& o) { a_ += o.a_; b_ += o.b_; return *this; }
  QSqrt3& operator-=(const QSqrt3& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  QSqrt3& operator*=(const QSqrt3& o) {
    Rational na = a_ * o.a_ + Rational(3) * b_ * o.b_;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
  }
  QSqrt3& operator/=(const QSqrt3& o) { return *this *= o.inverse(); }

  friend QSqrt3 operator+(QSqrt3 x, const QSqrt3& y) { return x += y; }
  friend QSqrt3 operator-(QSqrt3 x, const QSqrt3& y) { return x -= y; }
  friend QSqrt3 operator*(QSqrt3 x, const QSqrt3& y) { return x *= y; }
  friend QSqrt3 operator/(QSqrt3 x, const QSqrt3& y) { return x /= y; }
  friend bool operator==(const QSqrt3& x, const QSqrt3& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

  std::string str() const {
    if (b_.is_zero()) return a_.str();
    std::string rad = b_ == Rational(1) ? "sqrt3" : b_ == Rational(-1) ? "-sqrt3" : b_.str() + "*sqrt3";
    if (a_.is_zero()) return rad;
    return a_.str() + (b_.sign() > 0 ? "+" : "") + rad;
  }
  friend std::ostream& operator<<(std::ostream& os, const QSqrt3& q) { return os << q.str(); }

 private:
  Rational a_{0};
  Rational b_{0};
};

// 3^{r/2}, exact.
inline QSqrt3 three_pow_half(int r) {
  bool neg = r < 0;
  int e = neg ? -r : r;
  Rational whole = pow(Rational(3), e / 2);
  QSqrt3 out = (e % 2) ? QSqrt3(Rational(0), whole) : QSqrt3(whole);
  return neg ? out.inverse() : out;
}

// Sparse polynomial in N variables over Q(sqrt3); zero coefficients never stored.
template <std::size_t N>
class SparsePoly {
 public:
  using Exponent = std::array<int, N>;
  using Terms = std::map<Exponent, QSqrt3>;

  SparsePoly() = default;
  SparsePoly(const QSqrt3& c) {  // NOLINT: constants promote
    if (!c.is_zero()) terms_[Exponent{}] = c;
  }
  SparsePoly(const Rational& c) : SparsePoly(QSqrt3(c)) {}  // NOLINT
  template <std::integral T>
  SparsePoly(T c) : SparsePoly(QSqrt3(Rational(c))) {}  // NOLINT

  static SparsePoly variable(std::size_t k) {
    Exponent e{};
    e[k] = 1;
    SparsePoly p;
    p.terms_[e] = QSqrt3(1);
    return p;
  }

  static SparsePoly monomial(const Exponent& e, const QSqrt3& c) {
    SparsePoly p;
    if (!c.is_zero()) p.terms_[e] = c;
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  QSqrt3 coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? QSqrt3() : it->second;
  }

  int degree(std::size_t k) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[k]);
    return d;
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  SparsePoly operator-() const {
    SparsePoly p;
    for (const auto& [e, c] : terms_) p.terms_[e] = -c;
    return p;
  }
  SparsePoly& operator+=(const SparsePoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  SparsePoly& operator-=(const SparsePoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

  friend SparsePoly operator+(SparsePoly x, const SparsePoly& y) { return x += y; }
  friend SparsePoly operator-(SparsePoly x, const SparsePoly& y) { return x -= y; }
  friend SparsePoly operator*(const SparsePoly& x, const SparsePoly& y) {
    SparsePoly p;
    for (const auto& [e1, c1] : x.terms_)
      for (const auto& [e2, c2] : y.terms_) {
        Exponent e;
        for (std::size_t k = 0; k < N; ++k) e[k] = e1[k] + e2[k];
        p.add_term(e, c1 * c2);
      }
    return p;
  }
  friend bool operator==(const SparsePoly& x, const SparsePoly& y) { return x.terms_ == y.terms_; }

  SparsePoly scaled(const QSqrt3& s) const {
    SparsePoly p;
    if (s.is_zero()) return p;
    for (const auto& [e, c] : terms_) p.terms_[e] = c * s;
    return p;
  }

  // Evaluate with all variables bound.
  QSqrt3 eval(const std::array<QSqrt3, N>& at) const {
    QSqrt3 out;
    for (const auto& [e, c] : terms_) {
      QSqrt3 t = c;
      for (std::size_t k = 0; k < N; ++k)
        for (int i = 0; i < e[k]; ++i) t *= at[k];
      out += t;
    }
    return out;
  }

  // Bind variable k to a value, keeping the others symbolic.
  SparsePoly substitute(std::size_t k, const QSqrt3& v) const {
    SparsePoly p;
    for (const auto& [e, c] : terms_) {
      QSqrt3 t = c;
      for (int i = 0; i < e[k]; ++i) t *= v;
      Exponent f = e;
      f[k] = 0;
      p.add_term(f, t);
    }
    return p;
  }

  // Replace variable k by a polynomial.
  SparsePoly compose(std::size_t k, const SparsePoly& v) const {
    SparsePoly out;
    for (const auto& [e, c] : terms_) {
      Exponent f = e;
      f[k] = 0;
      SparsePoly t = monomial(f, c);
      for (int i = 0; i < e[k]; ++i) t = t * v;
      out += t;
    }
    return out;
  }

  // x_k -> -x_k
  SparsePoly reflect(std::size_t k) const {
    SparsePoly p;
    for (const auto& [e, c] : terms_) p.terms_[e] = (e[k] % 2) ? -c : c;
    return p;
  }

  SparsePoly derivative(std::size_t k) const {
    SparsePoly p;
    for (const auto& [e, c] : terms_) {
      if (e[k] == 0) continue;
      Exponent f = e;
      f[k] -= 1;
      p.add_term(f, c * QSqrt3(Rational(e[k])));
    }
    return p;
  }

  // Divide by x_k^s; throws if some term has lower x_k-degree.
  SparsePoly divide_by_variable(std::size_t k, int s = 1) const {
    SparsePoly p;
    for (const auto& [e, c] : terms_) {
      if (e[k] < s) throw Error("polynomial not divisible by variable power");
      Exponent f = e;
      f[k] -= s;
      p.terms_[f] = c;
    }
    return p;
  }

  bool has_rational_coefficients() const {
    for (const auto& [e, c] : terms_)
      if (!c.is_rational()) return false;
    return true;
  }

  std::string str(const std::array<const char*, N>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::string cs = c.str();
      bool unit = true;
      for (int x : e) unit = unit && x == 0;
      if (!first) os << " + ";
      first = false;
      bool bare = false;
      if (!unit && c == QSqrt3(1)) bare = true;
      if (!bare) os << (c.is_rational() ? cs : "(" + cs + ")");
      for (std::size_t k = 0; k < N; ++k) {
        if (e[k] == 0) continue;
        if (!bare) os << "*";
        bare = false;
        os << names[k];
        if (e[k] > 1) os << "^" << e[k];
      }
    }
    return os.str();
  }

 private:
  void add_term(const Exponent& e, const QSqrt3& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  Terms terms_;
};

// Polynomials in g = gamma^{1/2} (variable 0) and d = delta (variable 1).
using GDPoly = SparsePoly<2>;

namespace gd {
inline GDPoly g() { return GDPoly::variable(0); }
inline GDPoly d() { return GDPoly::variable(1); }
inline GDPoly gamma() { return g() * g(); }
inline QSqrt3 eval(const GDPoly& p, const QSqrt3& g, const QSqrt3& d) { return p.eval({g, d}); }
inline GDPoly substitute_g(const GDPoly& p, const QSqrt3& v) { return p.substitute(0, v); }
inline GDPoly substitute_d(const GDPoly& p, const QSqrt3& v) { return p.substitute(1, v); }
inline GDPoly negate_g(const GDPoly& p) { return p.reflect(0); }
inline GDPoly negate_d(const GDPoly& p) { return p.reflect(1); }
inline std::string str(const GDPoly& p) { return p.str({"g", "d"}); }

// True when only even powers of g occur.
inline bool is_even(const GDPoly& p) {
  for (const auto& [e, c] : p.terms())
    if (e[0] % 2) return false;
  return true;
}
inline bool is_odd(const GDPoly& p) {
  for (const auto& [e, c] : p.terms())
    if (e[0] % 2 == 0) return false;
  return true;
}

// Evaluate an even polynomial at gamma = g^2 directly; gamma need not be a square.
inline QSqrt3 eval_even(const GDPoly& p, const Rational& gamma, const QSqrt3& d) {
  if (!is_even(p)) throw Error("eval_even on polynomial with odd g-powers");
  QSqrt3 out;
  for (const auto& [e, c] : p.terms()) {
    QSqrt3 t = c * QSqrt3(pow(gamma, e[0] / 2));
    for (int i = 0; i < e[1]; ++i) t *= d;
    out += t;
  }
  return out;
}
}  // namespace gd

inline std::pair<GDPoly, GDPoly> parity_split(const GDPoly& p) {
  GDPoly even, odd;
  for (const auto& [e, c] : p.terms())
    (e[0] % 2 ? odd : even) += GDPoly::monomial(e, c);
  return {even, odd};
}

// Dense polynomial in one variable u.
class UPoly {
 public:
  UPoly() = default;
  UPoly(const QSqrt3& c) {  // NOLINT
    if (!c.is_zero()) c_.push_back(c);
  }
  UPoly(const Rational& c) : UPoly(QSqrt3(c)) {}  // NOLINT
  template <std::integral T>
  UPoly(T c) : UPoly(QSqrt3(Rational(c))) {}  // NOLINT
  explicit UPoly(std::vector<QSqrt3> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UPoly u() { return UPoly(std::vector<QSqrt3>{QSqrt3(0), QSqrt3(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  QSqrt3 coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : QSqrt3(); }
  const std::vector<QSqrt3>& coeffs() const { return c_; }

  UPoly operator-() const {
    UPoly p = *this;
    for (auto& x : p.c_) x = -x;
    return p;
  }
  UPoly& operator+=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  UPoly& operator-=(const UPoly& o) { return *this += -o; }
  friend UPoly operator+(UPoly x, const UPoly& y) { return x += y; }
  friend UPoly operator-(UPoly x, const UPoly& y) { return x -= y; }
  friend UPoly operator*(const UPoly& x, const UPoly& y) {
    if (x.is_zero() || y.is_zero()) return {};
    std::vector<QSqrt3> out(x.c_.size() + y.c_.size() - 1);
    for (std::size_t i = 0; i < x.c_.size(); ++i)
      for (std::size_t j = 0; j < y.c_.size(); ++j) out[i + j] += x.c_[i] * y.c_[j];
    return UPoly(std::move(out));
  }
  UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
  friend bool operator==(const UPoly& x, const UPoly& y) { return x.c_ == y.c_; }

  UPoly derivative() const {
    std::vector<QSqrt3> out;
    for (std::size_t i = 1; i < c_.size(); ++i) out.push_back(c_[i] * QSqrt3(Rational(static_cast<long>(i))));
    return UPoly(std::move(out));
  }

  QSqrt3 eval(const QSqrt3& x) const {
    QSqrt3 out;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) out = out * x + *it;
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<QSqrt3> c_;
};

// Falling factorial (x)_r = x(x-1)...(x-r+1); (x)_0 = 1.
template <class T>
T pochhammer(const T& x, int r) {
  if (r < 0) throw Error("pochhammer with negative length");
  T out(1);
  for (int i = 0; i < r; ++i) out = out * (x - T(Rational(i)));
  return out;
}

inline Rational gen_binomial(const Rational& r, int s) {
  return pochhammer(r, s) / factorial(s);
}

}  // namespace modeq
