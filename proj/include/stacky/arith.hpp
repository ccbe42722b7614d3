#ifndef STACKY_ARITH_HPP
#define STACKY_ARITH_HPP

/* Rational integer helpers shared by every module: primality, factoring,
 * word-size modular arithmetic and a few conversions. */

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stacky/error.hpp"

namespace stacky {

using Integer = mpz_class;
using Rational = mpq_class;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 to_u64(const Integer& z)
{
  if (sgn(z) < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64)
    throw Error(Errc::Unsupported, "integer " + z.get_str() + " does not fit a machine word");
  return static_cast<u64>(mpz_get_ui(z.get_mpz_t()));
}

inline Integer from_u64(u64 v)
{
  Integer z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m)
{
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

/* Inverse modulo a prime. */
inline u64 invmod(u64 a, u64 m)
{
  a %= m;
  if (a == 0) throw Error(Errc::DivisionByZero, "inverse of 0 modulo " + std::to_string(m));
  return powmod(a, m - 2, m);
}

/* Reduce a rational with denominator prime to m into [0, m). */
inline u64 reduce_mod(const Rational& r, u64 m)
{
  Integer M = from_u64(m);
  Integer num = r.get_num() % M;
  if (num < 0) num += M;
  Integer den = r.get_den() % M;
  if (den == 0) throw Error(Errc::DivisionByZero, "denominator divisible by " + std::to_string(m));
  return mulmod(to_u64(num), invmod(to_u64(den), m), m);
}

inline u64 reduce_mod(const Integer& z, u64 m)
{
  Integer M = from_u64(m);
  Integer r = z % M;
  if (r < 0) r += M;
  return to_u64(r);
}

inline bool is_prime(const Integer& n)
{
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

inline bool is_prime(u64 n) { return is_prime(from_u64(n)); }

inline u64 next_prime(u64 n)
{
  do {
    ++n;
  } while (!is_prime(n));
  return n;
}

inline std::vector<u64> primes_up_to(u64 bound)
{
  std::vector<u64> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(bound + 1, true);
  for (u64 i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= bound; j += i) sieve[j] = false;
  }
  return out;
}

inline Integer isqrt(const Integer& n)
{
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_square(const Integer& n, Integer* root = nullptr)
{
  if (n < 0) return false;
  Integer r = isqrt(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

inline bool is_square(const Rational& q, Rational* root = nullptr)
{
  Integer a, b;
  if (!is_square(Integer(q.get_num()), &a) || !is_square(Integer(q.get_den()), &b)) return false;
  if (root) {
    *root = Rational(a, b);
    root->canonicalize();
  }
  return true;
}

/* Exponent of the prime ell in n (n != 0). */
inline int valuation(Integer n, const Integer& ell)
{
  if (n == 0) throw Error(Errc::ZeroElement, "valuation of 0");
  int v = 0;
  while (mpz_divisible_p(n.get_mpz_t(), ell.get_mpz_t())) {
    n /= ell;
    ++v;
  }
  return v;
}

namespace detail {

inline Integer pollard_brent(const Integer& n)
{
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, m = 64;
    auto f = [&](const Integer& v) { return Integer((v * v + c) % n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = (q * abs(x - y)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Integer d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(Integer n, std::map<Integer, int>& out)
{
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  Integer d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/* Prime factorization of |n| (n != 0), ascending. */
inline std::map<Integer, int> factor_integer(Integer n)
{
  if (n == 0) throw Error(Errc::ZeroElement, "factorization of 0");
  n = abs(n);
  std::map<Integer, int> out;
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL, 11UL, 13UL}) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out[Integer(p)] += 1;
      n /= p;
    }
  }
  for (unsigned long p = 17; p < 10000 && n > 1; p += 2) {
    if (Integer(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out[Integer(p)] += 1;
      n /= p;
    }
  }
  detail::factor_into(n, out);
  return out;
}

inline std::vector<Integer> prime_divisors(const Integer& n)
{
  std::vector<Integer> out;
  for (auto& [p, e] : factor_integer(n)) out.push_back(p);
  return out;
}

/* All positive divisors of |n|. */
inline std::vector<Integer> divisors(const Integer& n)
{
  std::vector<Integer> out{1};
  for (auto& [p, e] : factor_integer(n)) {
    std::size_t sz = out.size();
    Integer pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Integer pow_int(const Integer& b, unsigned long e)
{
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Rational make_rational(const Integer& num, const Integer& den)
{
  if (den == 0) throw Error(Errc::DivisionByZero, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/* Strict decimal integer syntax: optional '-', digits, no leading '+'. */
inline bool parse_decimal(const std::string& s, Integer& out)
{
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') return false;
  if (s.size() - i > 1 && s[i] == '0') return false;
  if (s == "-0") return false;
  out = Integer(s, 10);
  return true;
}

}  // namespace stacky

#endif
