#ifndef STACKY_POLY_HPP
#define STACKY_POLY_HPP

/* Dense univariate polynomials over Q, coefficients stored low degree first.
 * The zero polynomial is the empty vector. */

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "stacky/arith.hpp"

namespace stacky {

using QPoly = std::vector<Rational>;
using ZPoly = std::vector<Integer>;

inline void trim(QPoly& a)
{
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const QPoly& a) { return static_cast<int>(a.size()) - 1; }

inline QPoly to_qpoly(const ZPoly& a)
{
  QPoly r(a.begin(), a.end());
  trim(r);
  return r;
}

inline QPoly poly_add(const QPoly& a, const QPoly& b)
{
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline QPoly poly_neg(QPoly a)
{
  for (auto& c : a) c = -c;
  return a;
}

inline QPoly poly_sub(const QPoly& a, const QPoly& b) { return poly_add(a, poly_neg(b)); }

inline QPoly poly_scale(QPoly a, const Rational& s)
{
  if (s == 0) return {};
  for (auto& c : a) c *= s;
  return a;
}

inline QPoly poly_mul(const QPoly& a, const QPoly& b)
{
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

inline QPoly poly_pow(const QPoly& a, unsigned e)
{
  QPoly r{Rational(1)}, b = a;
  while (e) {
    if (e & 1) r = poly_mul(r, b);
    e >>= 1;
    if (e) b = poly_mul(b, b);
  }
  return r;
}

/* Quotient and remainder; b must be nonzero. */
inline std::pair<QPoly, QPoly> poly_divmod(QPoly a, const QPoly& b)
{
  if (b.empty()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  QPoly q(a.size() - b.size() + 1);
  Rational lead_inv = 1 / b.back();
  for (int i = degree(a); i >= degree(b); --i) {
    Rational c = a[i] * lead_inv;
    q[i - degree(b)] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[i - degree(b) + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

inline QPoly poly_mod(const QPoly& a, const QPoly& b) { return poly_divmod(a, b).second; }

inline QPoly poly_monic(QPoly a)
{
  if (a.empty()) return a;
  return poly_scale(a, 1 / Rational(a.back()));
}

inline QPoly poly_gcd(QPoly a, QPoly b)
{
  while (!b.empty()) {
    QPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

inline QPoly poly_derivative(const QPoly& a)
{
  QPoly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * Rational(static_cast<long>(i)));
  trim(r);
  return r;
}

inline Rational poly_eval(const QPoly& a, const Rational& x)
{
  Rational r = 0;
  for (int i = degree(a); i >= 0; --i) r = r * x + a[i];
  return r;
}

/* Resultant by the Euclidean recurrence
 * Res(A,B) = (-1)^{deg A deg B} lc(B)^{deg A - deg R} Res(B,R). */
inline Rational resultant(QPoly a, QPoly b)
{
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;
  Rational acc = 1;
  while (true) {
    int m = degree(a), n = degree(b);
    if (n == 0) {
      Rational p = 1;
      for (int i = 0; i < m; ++i) p *= b[0];
      return acc * p;
    }
    if (m == 0) {
      Rational p = 1;
      for (int i = 0; i < n; ++i) p *= a[0];
      return acc * p;
    }
    QPoly r = poly_mod(a, b);
    if (r.empty()) return 0;
    int rd = degree(r);
    if ((m % 2 == 1) && (n % 2 == 1)) acc = -acc;
    for (int i = 0; i < m - rd; ++i) acc *= b.back();
    a = std::move(b);
    b = std::move(r);
  }
}

/* Sturm sequence of a squarefree polynomial. */
inline std::vector<QPoly> sturm_sequence(const QPoly& f)
{
  std::vector<QPoly> seq{f, poly_derivative(f)};
  while (!seq.back().empty()) {
    QPoly r = poly_neg(poly_mod(seq[seq.size() - 2], seq.back()));
    if (r.empty()) break;
    seq.push_back(std::move(r));
  }
  if (seq.back().empty()) seq.pop_back();
  return seq;
}

inline int sign_changes_at(const std::vector<QPoly>& seq, const Rational& x)
{
  int changes = 0, last = 0;
  for (auto& p : seq) {
    int s = sgn(poly_eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/* Number of distinct real roots in the half-open interval (lo, hi]. */
inline int count_roots(const std::vector<QPoly>& seq, const Rational& lo, const Rational& hi)
{
  return sign_changes_at(seq, lo) - sign_changes_at(seq, hi);
}

inline Rational cauchy_bound(const QPoly& f)
{
  Rational m = 0;
  for (int i = 0; i < degree(f); ++i) {
    Rational c = abs(f[i] / f.back());
    if (c > m) m = c;
  }
  return m + 1;
}

namespace detail {

class PolyParser {
 public:
  PolyParser(const std::string& text, char var) : var_(var)
  {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  QPoly parse()
  {
    if (s_.empty()) fail("empty polynomial");
    QPoly r = expr();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const
  {
    throw Error(Errc::ParseError, why + " in \"" + s_ + "\"");
  }
  bool eat(char c)
  {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  QPoly expr()
  {
    QPoly acc;
    bool first = true;
    while (true) {
      bool neg = false;
      if (eat('-'))
        neg = true;
      else if (!eat('+') && !first)
        break;
      QPoly t = term();
      acc = neg ? poly_sub(acc, t) : poly_add(acc, t);
      first = false;
      if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
    }
    return acc;
  }
  QPoly term()
  {
    QPoly r = power();
    while (true) {
      if (eat('*')) {
        r = poly_mul(r, power());
      } else if (eat('/')) {
        QPoly d = power();
        if (d.size() > 1 || d.empty()) fail("division by a non-constant");
        r = poly_scale(r, 1 / d[0]);
      } else if (pos_ < s_.size() && (s_[pos_] == var_ || s_[pos_] == '(')) {
        r = poly_mul(r, power());  // implicit product such as 3t or 2(t+1)
      } else {
        break;
      }
    }
    return r;
  }
  QPoly power()
  {
    QPoly base = atom();
    if (eat('^')) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("missing exponent");
      if (pos_ - start > 4) fail("exponent too large");
      base = poly_pow(base, static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return base;
  }
  QPoly atom()
  {
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == var_) {
      ++pos_;
      return {Rational(0), Rational(1)};
    }
    if (c == '(') {
      ++pos_;
      QPoly r = expr();
      if (!eat(')')) fail("missing ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      QPoly r{Rational(Integer(s_.substr(start, pos_ - start), 10))};
      trim(r);
      return r;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
  char var_;
};

}  // namespace detail

/* Parse text such as "x^3 - 2x + 1/2" in the given variable letter. */
inline QPoly parse_poly(const std::string& text, char var)
{
  return detail::PolyParser(text, var).parse();
}

inline std::string format_poly(const QPoly& a, char var)
{
  if (a.empty()) return "0";
  std::string out;
  for (int i = degree(a); i >= 0; --i) {
    const Rational& c = a[i];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (out.empty())
      out += sgn(c) < 0 ? "-" : "";
    else
      out += sgn(c) < 0 ? "-" : "+";
    bool unit = mag == 1;
    if (!unit || i == 0) out += mag.get_str();
    if (i > 0) {
      if (!unit) out += "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

}  // namespace stacky

#endif
