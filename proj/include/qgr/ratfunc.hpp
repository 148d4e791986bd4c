/**
 * @file ratfunc.hpp
 * @brief Exact arithmetic in the rational function field Q(q).
 *
 * Scalars are represented as canonical reduced fractions of integer-coefficient
 * univariate polynomials in the symbol q.  Canonical form means:
 *   - the denominator is nonzero and has positive leading coefficient,
 *   - numerator and denominator have no common polynomial factor,
 *   - the integer contents of numerator and denominator are coprime,
 *   - zero is stored as 0/1.
 * Every constructor and arithmetic operation restores canonical form eagerly,
 * so equality of values is equality of representations.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgr {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ======================================================================
// Poly: dense univariate polynomial over Z, coefficients low to high.
// Invariant: no trailing zero coefficients (empty vector encodes 0).
// ======================================================================
class Poly {
 public:
  Poly() = default;
  Poly(long long c) { if (c != 0) c_.push_back(Int(c)); }
  Poly(Int c) { if (c != 0) c_.push_back(std::move(c)); }

  static Poly variable() { return monomial(1, 1); }

  static Poly monomial(Int coeff, unsigned deg) {
    Poly p;
    if (coeff != 0) {
      p.c_.assign(deg + 1, Int(0));
      p.c_[deg] = std::move(coeff);
    }
    return p;
  }

  static Poly from_coeffs(std::vector<Int> c) {
    Poly p;
    p.c_ = std::move(c);
    p.trim();
    return p;
  }

  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

  [[nodiscard]] Int coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return Int(0);
    return c_[static_cast<size_t>(k)];
  }

  /// Leading coefficient; zero polynomial yields 0.
  [[nodiscard]] Int leading() const { return c_.empty() ? Int(0) : c_.back(); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), Int(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return from_coeffs(std::move(c));
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), Int(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return from_coeffs(std::move(c));
  }

  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Int> c(a.c_.size() + b.c_.size() - 1, Int(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return from_coeffs(std::move(c));
  }

  Poly& operator+=(const Poly& b) { *this = *this + b; return *this; }
  Poly& operator-=(const Poly& b) { *this = *this - b; return *this; }
  Poly& operator*=(const Poly& b) { *this = *this * b; return *this; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Multiply by the scalar monomial c*q^deg.
  [[nodiscard]] Poly shifted(const Int& c, unsigned deg) const {
    if (is_zero() || c == 0) return Poly();
    std::vector<Int> r(c_.size() + deg, Int(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i + deg] = c_[i] * c;
    return from_coeffs(std::move(r));
  }

  /// gcd of the coefficients, nonnegative; content(0) = 0.
  [[nodiscard]] Int content() const {
    Int g = 0;
    for (const auto& x : c_) {
      g = boost::multiprecision::gcd(g, x);
      if (g == 1) break;
    }
    return g;
  }

  /// Polynomial divided by its content, sign chosen so the leading
  /// coefficient is positive.  primitive_part(0) = 0.
  [[nodiscard]] Poly primitive_part() const {
    if (is_zero()) return Poly();
    Int g = content();
    if (leading() < 0) g = -g;
    Poly r = *this;
    for (auto& x : r.c_) x /= g;
    return r;
  }

  /// Exact division: if d divides *this over Q with integer quotient steps,
  /// store the quotient and return true; otherwise return false.
  bool try_divide(const Poly& d, Poly* quot) const {
    if (d.is_zero()) return false;
    if (is_zero()) { if (quot) *quot = Poly(); return true; }
    if (degree() < d.degree()) return false;
    std::vector<Int> rem = c_;
    std::vector<Int> q(static_cast<size_t>(degree() - d.degree()) + 1, Int(0));
    const Int& dl = d.leading();
    for (int k = degree() - d.degree(); k >= 0; --k) {
      Int top = rem[static_cast<size_t>(k + d.degree())];
      if (top == 0) continue;
      if (top % dl != 0) return false;
      Int f = top / dl;
      q[static_cast<size_t>(k)] = f;
      for (int i = 0; i <= d.degree(); ++i)
        rem[static_cast<size_t>(k + i)] -= f * d.coeff(i);
    }
    for (const auto& x : rem)
      if (x != 0) return false;
    if (quot) *quot = from_coeffs(std::move(q));
    return true;
  }

  /// Pseudo-remainder: leading(b)^(deg a - deg b + 1) * a  mod  b.
  /// Requires b nonzero.  (Knuth-style primitive PRS building block.)
  static Poly pseudo_rem(Poly a, const Poly& b) {
    const Int& bl = b.leading();
    while (!a.is_zero() && a.degree() >= b.degree()) {
      int shift = a.degree() - b.degree();
      Int al = a.leading();
      // a <- bl*a - al*q^shift*b   (kills the leading term)
      std::vector<Int> c(a.c_.size(), Int(0));
      for (size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i] * bl;
      for (int i = 0; i <= b.degree(); ++i)
        c[static_cast<size_t>(i + shift)] -= al * b.coeff(i);
      a = from_coeffs(std::move(c));
    }
    return a;
  }

  /// Polynomial gcd via the primitive PRS; result is primitive with
  /// positive leading coefficient (content is handled separately by
  /// callers that care about integer factors).
  static Poly gcd(Poly a, Poly b) {
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    a = a.primitive_part();
    b = b.primitive_part();
    while (!b.is_zero()) {
      Poly r = pseudo_rem(a, b).primitive_part();
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  [[nodiscard]] Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Int> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Int(i);
    return from_coeffs(std::move(d));
  }

  /// Exact square root in Z[q], if *this is a perfect square.
  [[nodiscard]] std::optional<Poly> sqrt_exact() const {
    if (is_zero()) return Poly();
    if (degree() % 2 != 0 || leading() < 0) return std::nullopt;
    Int lr = boost::multiprecision::sqrt(leading());
    if (lr * lr != leading()) return std::nullopt;
    int h = degree() / 2;
    std::vector<Int> g(static_cast<size_t>(h) + 1, Int(0));
    g[static_cast<size_t>(h)] = lr;
    // Solve coefficients top down: coefficient of q^(h+k) in g^2 must match.
    for (int k = h - 1; k >= 0; --k) {
      Int s = 0;
      for (int i = k + 1; i < h; ++i) {
        int j = h + k - i;
        if (j > k && j <= h) s += g[static_cast<size_t>(i)] * g[static_cast<size_t>(j)];
      }
      Int target = coeff(h + k) - s;
      Int den = 2 * lr;
      if (target % den != 0) return std::nullopt;
      g[static_cast<size_t>(k)] = target / den;
    }
    Poly cand = from_coeffs(std::move(g));
    if (cand * cand == *this) return cand;
    return std::nullopt;
  }

  [[nodiscard]] Rational evaluate(const Rational& q0) const {
    Rational acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * q0 + Rational(c_[i]);
    return acc;
  }

  /// Canonical text, descending powers: "q^2-1", "2*q", "-q^3+3", "0".
  [[nodiscard]] std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      Int c = coeff(k);
      if (c == 0) continue;
      bool neg = c < 0;
      Int a = neg ? Int(-c) : c;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? "-" : "+";
      std::string mag;
      if (k == 0) {
        mag = a.str();
      } else {
        if (a != 1) mag = a.str() + "*";
        mag += "q";
        if (k > 1) mag += "^" + std::to_string(k);
      }
      out += mag;
    }
    return out;
  }

  [[nodiscard]] size_t term_count() const {
    size_t n = 0;
    for (const auto& x : c_)
      if (x != 0) ++n;
    return n;
  }

  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int k = a.degree(); k >= 0; --k) {
      Int x = a.coeff(k), y = b.coeff(k);
      if (x != y) return x < y;
    }
    return false;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

// ======================================================================
// RatFunc: canonical reduced fraction num/den of integer polynomials.
// ======================================================================
class RatFunc {
 public:
  RatFunc() : num_(), den_(1) {}
  RatFunc(long long c) : num_(c), den_(1) {}
  RatFunc(Int c) : num_(std::move(c)), den_(1) {}
  RatFunc(Poly n) : num_(std::move(n)), den_(1) {}
  RatFunc(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { canonicalize(); }
  RatFunc(const Rational& x)
      : num_(Poly(boost::multiprecision::numerator(x))),
        den_(Poly(boost::multiprecision::denominator(x))) {
    canonicalize();
  }

  static RatFunc q() { return RatFunc(Poly::variable()); }

  /// q^k for any integer k (negative exponents give 1/q^{-k}).
  static RatFunc q_power(long long k) {
    if (k >= 0) return RatFunc(Poly::monomial(1, static_cast<unsigned>(k)));
    return RatFunc(Poly(1), Poly::monomial(1, static_cast<unsigned>(-k)));
  }

  /// qhat = q - q^{-1} = (q^2-1)/q.
  static RatFunc qhat() {
    return RatFunc(Poly::monomial(1, 2) - Poly(1), Poly::variable());
  }

  [[nodiscard]] const Poly& numerator() const { return num_; }
  [[nodiscard]] const Poly& denominator() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
  [[nodiscard]] bool is_one() const { return num_.is_one() && den_.is_one(); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a) {
    RatFunc r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("division by zero in Q(q)");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }

  RatFunc& operator+=(const RatFunc& b) { *this = *this + b; return *this; }
  RatFunc& operator-=(const RatFunc& b) { *this = *this - b; return *this; }
  RatFunc& operator*=(const RatFunc& b) { *this = *this * b; return *this; }
  RatFunc& operator/=(const RatFunc& b) { *this = *this / b; return *this; }

  [[nodiscard]] RatFunc inv() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(q)");
    return RatFunc(den_, num_);
  }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
  friend bool operator<(const RatFunc& a, const RatFunc& b) {
    if (a.num_ != b.num_) return a.num_ < b.num_;
    return a.den_ < b.den_;
  }

  /// Evaluate at a rational point; throws std::domain_error("pole") when the
  /// (reduced) denominator vanishes there.
  [[nodiscard]] Rational evaluate_at(const Rational& q0) const {
    Rational d = den_.evaluate(q0);
    if (d == 0) throw std::domain_error("pole");
    return num_.evaluate(q0) / d;
  }

  /// Canonical text: "(q^2-1)/q", "q+1", "0", "1/(q-1)".
  [[nodiscard]] std::string str() const {
    if (den_.is_one()) return num_.str();
    std::string ns = num_.str();
    if (num_.term_count() > 1) ns = "(" + ns + ")";
    std::string ds = den_.str();
    bool needParens = den_.term_count() > 1 ||
                      (den_.degree() >= 1 && den_.leading() != 1);
    if (needParens) ds = "(" + ds + ")";
    return ns + "/" + ds;
  }

  static RatFunc parse(const std::string& text);

 private:
  void canonicalize() {
    if (den_.is_zero()) throw std::domain_error("division by zero in Q(q)");
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    Poly g = Poly::gcd(num_, den_);
    if (!g.is_one()) {
      Poly qn, qd;
      bool okn = num_.try_divide(g, &qn);
      bool okd = den_.try_divide(g, &qd);
      if (okn && okd) {
        num_ = std::move(qn);
        den_ = std::move(qd);
      }
    }
    // Reduce the integer contents jointly and fix the denominator sign.
    Int cn = num_.content();
    Int cd = den_.content();
    Int g2 = boost::multiprecision::gcd(cn, cd);
    if (den_.leading() < 0) g2 = -g2;
    if (g2 != 1) {
      std::vector<Int> nn(static_cast<size_t>(num_.degree()) + 1),
          dd(static_cast<size_t>(den_.degree()) + 1);
      for (int i = 0; i <= num_.degree(); ++i) nn[static_cast<size_t>(i)] = num_.coeff(i) / g2;
      for (int i = 0; i <= den_.degree(); ++i) dd[static_cast<size_t>(i)] = den_.coeff(i) / g2;
      num_ = Poly::from_coeffs(std::move(nn));
      den_ = Poly::from_coeffs(std::move(dd));
    }
  }

  Poly num_, den_;
};

// ----------------------------------------------------------------------
// Free-function interface.
// ----------------------------------------------------------------------
inline RatFunc normalize(Poly num, Poly den) { return RatFunc(std::move(num), std::move(den)); }
inline RatFunc add(const RatFunc& a, const RatFunc& b) { return a + b; }
inline RatFunc mul(const RatFunc& a, const RatFunc& b) { return a * b; }
inline RatFunc neg(const RatFunc& a) { return -a; }
inline RatFunc inv(const RatFunc& a) { return a.inv(); }
inline Rational evaluate_at(const RatFunc& f, const Rational& q0) { return f.evaluate_at(q0); }

/// Square root in Q(q) when one exists with rational-function value.
inline std::optional<RatFunc> sqrt_exact(const RatFunc& f) {
  auto n = f.numerator().sqrt_exact();
  if (!n) return std::nullopt;
  auto d = f.denominator().sqrt_exact();
  if (!d) return std::nullopt;
  return RatFunc(*n, *d);
}

// ----------------------------------------------------------------------
// Parser for the printed grammar (plus general +,-,*,/,^ expressions).
// ----------------------------------------------------------------------
namespace detail {
class RfParser {
 public:
  explicit RfParser(const std::string& s) : s_(s) {}
  RatFunc run() {
    RatFunc v = expr();
    skip();
    if (pos_ != s_.size()) throw std::invalid_argument("trailing characters in Q(q) literal");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }
  RatFunc expr() {
    RatFunc v = eat('-') ? -term() : term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  RatFunc term() {
    RatFunc v = factor();
    for (;;) {
      if (eat('*')) v *= factor();
      else if (eat('/')) v /= factor();
      else return v;
    }
  }
  RatFunc factor() {
    RatFunc base = atom();
    if (eat('^')) {
      bool negExp = eat('-');
      long long e = integer();
      RatFunc r(1);
      for (long long i = 0; i < e; ++i) r *= base;
      return negExp ? r.inv() : r;
    }
    return base;
  }
  RatFunc atom() {
    skip();
    if (eat('(')) {
      RatFunc v = expr();
      if (!eat(')')) throw std::invalid_argument("unbalanced parentheses in Q(q) literal");
      return v;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'q')) { ++pos_; return RatFunc::q(); }
    return RatFunc(Int(integer()));
  }
  long long integer() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw std::invalid_argument("expected integer in Q(q) literal");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  const std::string& s_;
  size_t pos_ = 0;
};
}  // namespace detail

inline RatFunc RatFunc::parse(const std::string& text) { return detail::RfParser(text).run(); }

}  // namespace qgr
