#ifndef STACKY_FP_POLY_HPP
#define STACKY_FP_POLY_HPP

/* Polynomials over the prime field F_ell (ell < 2^63), low degree first,
 * and their complete factorization: squarefree decomposition, distinct-degree
 * splitting, then deterministic equal-degree splitting. */

#include <algorithm>
#include <utility>
#include <vector>

#include "stacky/arith.hpp"
#include "stacky/poly.hpp"

namespace stacky {

using FpPoly = std::vector<u64>;

struct FpFactor {
  FpPoly factor;  // monic irreducible
  int multiplicity;
  bool operator==(const FpFactor&) const = default;
};

class Fp {
 public:
  explicit Fp(u64 ell) : ell_(ell)
  {
    if (!is_prime(ell)) throw Error(Errc::NotPrime, std::to_string(ell) + " is not prime");
  }

  u64 prime() const { return ell_; }

  static void trim(FpPoly& a)
  {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  static int deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

  FpPoly reduce(const ZPoly& a) const
  {
    FpPoly r;
    for (auto& c : a) r.push_back(reduce_mod(c, ell_));
    trim(r);
    return r;
  }

  FpPoly reduce(const QPoly& a) const
  {
    FpPoly r;
    for (auto& c : a) r.push_back(reduce_mod(c, ell_));
    trim(r);
    return r;
  }

  ZPoly lift(const FpPoly& a) const
  {
    ZPoly r;
    for (auto c : a) r.push_back(from_u64(c));
    return r;
  }

  FpPoly add(const FpPoly& a, const FpPoly& b) const
  {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % ell_;
    trim(r);
    return r;
  }

  FpPoly sub(const FpPoly& a, const FpPoly& b) const
  {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + ell_ - b[i]) % ell_;
    trim(r);
    return r;
  }

  FpPoly scale(FpPoly a, u64 s) const
  {
    for (auto& c : a) c = mulmod(c, s, ell_);
    trim(a);
    return a;
  }

  FpPoly mul(const FpPoly& a, const FpPoly& b) const
  {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], ell_)) % ell_;
    trim(r);
    return r;
  }

  std::pair<FpPoly, FpPoly> divmod(FpPoly a, const FpPoly& b) const
  {
    if (b.empty()) throw Error(Errc::DivisionByZero, "division by zero polynomial mod " + std::to_string(ell_));
    trim(a);
    if (a.size() < b.size()) return {{}, a};
    FpPoly q(a.size() - b.size() + 1, 0);
    u64 inv = invmod(b.back(), ell_);
    for (int i = deg(a); i >= deg(b); --i) {
      u64 c = mulmod(a[i], inv, ell_);
      q[i - deg(b)] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        std::size_t k = i - deg(b) + j;
        a[k] = (a[k] + ell_ - mulmod(c, b[j], ell_)) % ell_;
      }
    }
    trim(a);
    trim(q);
    return {q, a};
  }

  FpPoly mod(const FpPoly& a, const FpPoly& b) const { return divmod(a, b).second; }

  FpPoly monic(FpPoly a) const
  {
    if (a.empty()) return a;
    return scale(a, invmod(a.back(), ell_));
  }

  FpPoly gcd(FpPoly a, FpPoly b) const
  {
    while (!b.empty()) {
      FpPoly r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }

  FpPoly derivative(const FpPoly& a) const
  {
    FpPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(mulmod(a[i], i % ell_, ell_));
    trim(r);
    return r;
  }

  FpPoly mulmod_poly(const FpPoly& a, const FpPoly& b, const FpPoly& m) const { return mod(mul(a, b), m); }

  /* base^e mod m, exponent given as a big integer. */
  FpPoly powmod_poly(FpPoly base, Integer e, const FpPoly& m) const
  {
    FpPoly r = mod(FpPoly{1}, m);
    base = mod(base, m);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mulmod_poly(r, base, m);
      e >>= 1;
      if (e > 0) base = mulmod_poly(base, base, m);
    }
    return r;
  }

  u64 eval(const FpPoly& a, u64 x) const
  {
    u64 r = 0;
    for (int i = deg(a); i >= 0; --i) r = (mulmod(r, x, ell_) + a[i]) % ell_;
    return r;
  }

  /* Squarefree decomposition of a monic polynomial: pairs (g_i, i) with
   * a = prod g_i^i and each g_i squarefree, pairwise coprime. */
  std::vector<std::pair<FpPoly, int>> squarefree(const FpPoly& a) const
  {
    std::vector<std::pair<FpPoly, int>> out;
    squarefree_into(monic(a), 1, out);
    // merge equal multiplicities produced by the p-th root recursion
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.second < y.second; });
    std::vector<std::pair<FpPoly, int>> merged;
    for (auto& [g, m] : out) {
      if (!merged.empty() && merged.back().second == m)
        merged.back().first = mul(merged.back().first, g);
      else
        merged.emplace_back(g, m);
    }
    return merged;
  }

  /* Distinct-degree factorization of a monic squarefree polynomial. */
  std::vector<std::pair<FpPoly, int>> distinct_degree(FpPoly a) const
  {
    std::vector<std::pair<FpPoly, int>> out;
    FpPoly x{0, 1};
    FpPoly h = mod(x, a);
    for (int i = 1; deg(a) >= 2 * i; ++i) {
      h = powmod_poly(h, from_u64(ell_), a);
      FpPoly g = gcd(a, sub(h, x));
      if (deg(g) > 0) {
        out.emplace_back(g, i);
        a = divmod(a, g).first;
        h = mod(h, a);
      }
    }
    if (deg(a) > 0) out.emplace_back(a, deg(a));
    return out;
  }

  /* Split a monic squarefree product of irreducibles of common degree d. */
  std::vector<FpPoly> equal_degree(const FpPoly& a, int d) const
  {
    if (deg(a) == d) return {a};
    std::vector<FpPoly> pending{a}, done;
    Integer q = pow_int(from_u64(ell_), static_cast<unsigned long>(d));
    for (u64 index = 1; !pending.empty(); ++index) {
      FpPoly probe = from_index(index);
      std::vector<FpPoly> next;
      for (auto& g : pending) {
        if (deg(g) == d) {
          done.push_back(g);
          continue;
        }
        FpPoly t;
        if (ell_ == 2) {
          // trace map of F_{2^d}: probe + probe^2 + ... + probe^{2^{d-1}}
          FpPoly term = mod(probe, g);
          for (int j = 0; j < d; ++j) {
            t = add(t, term);
            term = mulmod_poly(term, term, g);
          }
        } else {
          t = sub(powmod_poly(probe, (q - 1) / 2, g), FpPoly{1});
        }
        FpPoly s = gcd(g, t);
        if (deg(s) > 0 && deg(s) < deg(g)) {
          next.push_back(s);
          next.push_back(divmod(g, s).first);
        } else {
          next.push_back(g);
        }
      }
      pending.clear();
      for (auto& g : next) (deg(g) == d ? done : pending).push_back(g);
    }
    return done;
  }

  /* Complete factorization of a nonzero polynomial (made monic), factors
   * sorted by coefficient list. */
  std::vector<FpFactor> factor(const FpPoly& a) const
  {
    std::vector<FpFactor> out;
    for (auto& [g, mult] : squarefree(a))
      for (auto& [h, d] : distinct_degree(g))
        for (auto& irr : equal_degree(h, d)) out.push_back({irr, mult});
    std::sort(out.begin(), out.end(), [](const FpFactor& x, const FpFactor& y) {
      return x.factor != y.factor ? x.factor < y.factor : x.multiplicity < y.multiplicity;
    });
    return out;
  }

 private:
  /* Polynomial whose base-ell digits are those of index; enumerates every
   * polynomial exactly once. */
  FpPoly from_index(u64 index) const
  {
    FpPoly r;
    while (index) {
      r.push_back(index % ell_);
      index /= ell_;
    }
    trim(r);
    return r;
  }

  void squarefree_into(const FpPoly& a, int scale, std::vector<std::pair<FpPoly, int>>& out) const
  {
    if (deg(a) <= 0) return;
    FpPoly da = derivative(a);
    if (da.empty()) {
      // a is a p-th power: take the p-th root coefficientwise
      FpPoly root;
      for (std::size_t i = 0; i < a.size(); i += ell_) root.push_back(a[i]);
      squarefree_into(root, scale * static_cast<int>(ell_), out);
      return;
    }
    FpPoly c = gcd(a, da);
    FpPoly w = divmod(a, c).first;
    int i = 1;
    while (deg(w) > 0) {
      FpPoly y = gcd(w, c);
      FpPoly z = divmod(w, y).first;
      if (deg(z) > 0) out.emplace_back(z, i * scale);
      ++i;
      w = y;
      c = divmod(c, y).first;
    }
    if (deg(c) > 0) {
      FpPoly root;
      for (std::size_t k = 0; k < c.size(); k += ell_) root.push_back(c[k]);
      squarefree_into(root, scale * static_cast<int>(ell_), out);
    }
  }

  u64 ell_;
};

}  // namespace stacky

#endif
