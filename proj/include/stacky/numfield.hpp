#ifndef STACKY_NUMFIELD_HPP
#define STACKY_NUMFIELD_HPP

/* Exact arithmetic in K = Q[x]/(f) for a monic irreducible f in Z[x], with
 * the order Z[theta] standing in for the ring of integers.  Places above a
 * rational prime come from the factorization of f modulo that prime, which
 * is only legitimate where Dedekind's criterion certifies Z[theta] maximal;
 * every place-level operation checks this first. */

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stacky/arith.hpp"
#include "stacky/fp_poly.hpp"
#include "stacky/poly.hpp"

namespace stacky {

/* Coordinates in the power basis 1, theta, ..., theta^{n-1}. */
struct Element {
  std::vector<Rational> c;
  bool operator==(const Element&) const = default;
};

/* A finite place P = (ell, g(theta)) with its local data.  The derived
 * elements make local computations cheap:
 *   uniformizer  v_P = 1 and a unit at every other place above ell
 *   anti         v_P = e-1 and v_Q >= e_Q at the other places Q above ell,
 *                so x -> x*anti/ell lowers v_P by one and keeps x ell-integral
 *   eps          ell / uniformizer^e, a P-unit
 */
struct FinitePlace {
  u64 prime = 0;
  FpPoly local_factor;
  int e = 0;
  int d = 0;

  ZPoly anti;
  Element uniformizer, uniformizer_inv, eps;

  Integer residue_size() const { return pow_int(from_u64(prime), static_cast<unsigned long>(d)); }

  bool operator==(const FinitePlace& o) const
  {
    return prime == o.prime && local_factor == o.local_factor && e == o.e && d == o.d;
  }
  bool operator<(const FinitePlace& o) const
  {
    if (prime != o.prime) return prime < o.prime;
    return local_factor < o.local_factor;
  }
};

/* A real embedding, given by an isolating interval of a root of f.  For the
 * degree-one field the interval degenerates to the rational root itself. */
struct RealPlace {
  Rational lo, hi;
  bool operator==(const RealPlace&) const = default;
  bool operator<(const RealPlace& o) const { return lo != o.lo ? lo < o.lo : hi < o.hi; }
};

using Place = std::variant<FinitePlace, RealPlace>;

inline bool is_finite(const Place& v) { return std::holds_alternative<FinitePlace>(v); }

inline bool place_less(const Place& a, const Place& b)
{
  if (a.index() != b.index()) return a.index() < b.index();
  if (is_finite(a)) return std::get<FinitePlace>(a) < std::get<FinitePlace>(b);
  return std::get<RealPlace>(a) < std::get<RealPlace>(b);
}

struct SupportEntry {
  FinitePlace place;
  int valuation;
};

struct PrimeElementVerdict {
  bool prime = false;
  std::optional<FinitePlace> place;
};

class NumberField {
 public:
  /* Validating constructor: f monic, degree >= 1, irreducible over Q. */
  explicit NumberField(ZPoly f) : f_(std::move(f))
  {
    while (!f_.empty() && f_.back() == 0) f_.pop_back();
    if (f_.size() < 2) throw Error(Errc::ParseError, "field polynomial must have degree >= 1");
    if (f_.back() != 1) throw Error(Errc::NotMonic, "leading coefficient " + f_.back().get_str());
    n_ = static_cast<int>(f_.size()) - 1;
    fq_ = to_qpoly(f_);
    check_irreducible();
  }

  int degree() const { return n_; }
  const ZPoly& poly() const { return f_; }
  const QPoly& qpoly() const { return fq_; }
  std::string poly_text() const { return format_poly(fq_, 'x'); }

  bool operator==(const NumberField& o) const { return f_ == o.f_; }

  /* ---- elements ---- */

  Element zero() const { return Element{std::vector<Rational>(n_, Rational(0))}; }
  Element from_rational(const Rational& r) const
  {
    Element a = zero();
    a.c[0] = r;
    return a;
  }
  Element from_int(long v) const { return from_rational(Rational(v)); }
  Element one() const { return from_int(1); }
  Element theta() const { return from_poly(QPoly{Rational(0), Rational(1)}); }

  Element from_poly(const QPoly& p) const
  {
    QPoly r = poly_mod(p, fq_);
    Element a = zero();
    for (std::size_t i = 0; i < r.size(); ++i) a.c[i] = r[i];
    return a;
  }
  Element from_zpoly(const ZPoly& p) const { return from_poly(to_qpoly(p)); }

  QPoly to_poly(const Element& a) const
  {
    QPoly p = a.c;
    trim(p);
    return p;
  }

  Element parse_element(const std::string& text) const { return from_poly(parse_poly(text, 't')); }
  std::string format(const Element& a) const { return format_poly(to_poly(a), 't'); }

  bool is_zero(const Element& a) const
  {
    return std::all_of(a.c.begin(), a.c.end(), [](const Rational& r) { return r == 0; });
  }
  bool is_integral(const Element& a) const
  {
    return std::all_of(a.c.begin(), a.c.end(), [](const Rational& r) { return r.get_den() == 1; });
  }
  bool is_rational(const Element& a) const
  {
    return std::all_of(a.c.begin() + 1, a.c.end(), [](const Rational& r) { return r == 0; });
  }

  Element add(const Element& a, const Element& b) const
  {
    Element r = a;
    for (int i = 0; i < n_; ++i) r.c[i] += b.c[i];
    return r;
  }
  Element neg(Element a) const
  {
    for (auto& x : a.c) x = -x;
    return a;
  }
  Element sub(const Element& a, const Element& b) const { return add(a, neg(b)); }
  Element scale(Element a, const Rational& s) const
  {
    for (auto& x : a.c) x *= s;
    return a;
  }
  Element mul(const Element& a, const Element& b) const { return from_poly(poly_mul(to_poly(a), to_poly(b))); }

  /* Inverse via the extended Euclidean algorithm on (a, f). */
  Element inv(const Element& a) const
  {
    if (is_zero(a)) throw Error(Errc::DivisionByZero, "inverse of zero");
    QPoly r0 = fq_, r1 = to_poly(a);
    QPoly s0, s1{Rational(1)};
    while (stacky::degree(r1) > 0) {
      auto [q, r] = poly_divmod(r0, r1);
      QPoly s = poly_sub(s0, poly_mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    // r1 is a nonzero constant because f is irreducible
    return from_poly(poly_scale(s1, 1 / Rational(r1[0])));
  }
  Element div(const Element& a, const Element& b) const { return mul(a, inv(b)); }

  Element pow(const Element& a, long e) const
  {
    Element base = e < 0 ? inv(a) : a;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Element r = one();
    while (k) {
      if (k & 1) r = mul(r, base);
      k >>= 1;
      if (k) base = mul(base, base);
    }
    return r;
  }

  /* N_{K/Q}(a) = Res(f, a) since f is monic. */
  Rational norm(const Element& a) const
  {
    if (is_zero(a)) return 0;
    return resultant(fq_, to_poly(a));
  }

  Rational trace(const Element& a) const
  {
    Rational t = 0;
    Element basis = one();
    for (int i = 0; i < n_; ++i) {
      t += mul(a, basis).c[i];
      basis = mul(basis, theta());
    }
    return t;
  }

  /* Discriminant of f, which is disc(Z[theta]). */
  Integer discriminant() const
  {
    Rational r = resultant(fq_, poly_derivative(fq_));
    long k = static_cast<long>(n_) * (n_ - 1) / 2;
    if (k % 2) r = -r;
    return r.get_num();
  }

  /* a = b / den with b having integer coordinates and den > 0 minimal. */
  std::pair<ZPoly, Integer> clear_denominator(const Element& a) const
  {
    Integer den = 1;
    for (auto& x : a.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    ZPoly b;
    for (auto& x : a.c) b.push_back(Integer(x.get_num() * (den / x.get_den())));
    return {b, den};
  }

  /* ---- places ---- */

  std::vector<FpFactor> factor_mod(u64 ell) const
  {
    Fp F(ell);
    return F.factor(F.reduce(f_));
  }

  bool order_maximal_at(u64 ell) const { return maximal_with(ell, factor_mod(ell)); }

  /* One place per irreducible factor of f mod ell, in local_factor order. */
  std::vector<FinitePlace> places_above(u64 ell) const
  {
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto it = cache_->places.find(ell);
      if (it != cache_->places.end()) return it->second;
    }
    Fp F(ell);
    FpPoly fbar = F.reduce(f_);
    auto factors = F.factor(fbar);
    if (!maximal_with(ell, factors))
      throw Error(Errc::OrderNotMaximalAtPrime,
                  "Z[theta] is not maximal at " + std::to_string(ell) + " for " + poly_text());
    std::vector<FinitePlace> out;
    for (auto& [g, m] : factors) {
      FinitePlace P;
      P.prime = ell;
      P.local_factor = g;
      P.e = m;
      P.d = Fp::deg(g);
      P.anti = F.lift(F.divmod(fbar, g).first);
      Element gtheta = from_zpoly(F.lift(g));
      bool use_g = !is_zero(gtheta) && valuation_with(gtheta, P) == 1;
      P.uniformizer = use_g ? gtheta : add(gtheta, from_rational(Rational(from_u64(ell))));
      P.uniformizer_inv = inv(P.uniformizer);
      P.eps = mul(from_rational(Rational(from_u64(ell))), pow(P.uniformizer_inv, P.e));
      out.push_back(std::move(P));
    }
    std::lock_guard<std::mutex> lock(cache_->mu);
    cache_->places.emplace(ell, out);
    return out;
  }

  /* Normalized valuation v_P(a); a != 0. */
  int valuation(const Element& a, const FinitePlace& P) const
  {
    if (is_zero(a)) throw Error(Errc::ZeroElement, "valuation of zero");
    return valuation_with(a, P);
  }

  /* Finite places with v_P(a) > 0 for integral nonzero a, ordered. */
  std::vector<SupportEntry> support(const Element& a) const
  {
    if (is_zero(a)) throw Error(Errc::ZeroElement, "support of zero");
    if (!is_integral(a)) throw Error(Errc::PreconditionViolated, "support needs an integral element");
    std::vector<SupportEntry> out;
    Rational N = norm(a);
    if (abs(N) == 1) return out;
    for (auto& ell : prime_divisors(N.get_num())) {
      for (auto& P : places_above(to_u64(ell))) {
        int v = valuation(a, P);
        if (v > 0) out.push_back({P, v});
      }
    }
    return out;
  }

  /* Odd means no place above 2 in the support; for integral a that is the
   * same as N(a) being odd, which needs no maximality at 2. */
  bool is_odd(const Element& a) const
  {
    if (is_zero(a)) throw Error(Errc::ZeroElement, "parity of zero");
    Rational N = norm(a);
    return mpz_odd_p(N.get_num_mpz_t()) != 0;
  }

  bool is_unit(const Element& a) const { return is_integral(a) && abs(norm(a)) == 1; }

  PrimeElementVerdict is_prime_element(const Element& a) const
  {
    if (is_zero(a)) throw Error(Errc::ZeroElement, "primality of zero");
    if (!is_integral(a)) throw Error(Errc::PreconditionViolated, "primality needs an integral element");
    if (abs(norm(a)) == 1) throw Error(Errc::UnitElement, format(a) + " is a unit");
    auto s = support(a);
    if (s.size() == 1 && s[0].valuation == 1) return {true, s[0].place};
    return {false, std::nullopt};
  }

  /* Rational primes at which a or a^{-1} may fail to be integral. */
  std::vector<Integer> bad_primes(const Element& a) const
  {
    auto [b, den] = clear_denominator(a);
    Integer prod = abs(norm(from_zpoly(b)).get_num()) * den;
    if (prod == 0) throw Error(Errc::ZeroElement, "bad primes of zero");
    return prime_divisors(prod);
  }

  /* ---- real places ---- */

  std::vector<RealPlace> real_places() const
  {
    if (n_ == 1) {
      Rational r = -fq_[0];
      return {RealPlace{r, r}};
    }
    auto seq = sturm_sequence(fq_);
    Rational B = cauchy_bound(fq_);
    std::vector<RealPlace> out;
    isolate(seq, -B, B, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  int real_place_count() const { return static_cast<int>(real_places().size()); }

  /* Shrink an isolating interval to half its width, keeping the root. */
  RealPlace refine(const RealPlace& R) const
  {
    if (R.lo == R.hi) return R;
    Rational mid = (R.lo + R.hi) / 2;
    int s_lo = sgn(poly_eval(fq_, R.lo));
    int s_mid = sgn(poly_eval(fq_, mid));
    if (s_mid == 0) return RealPlace{mid, mid};
    return s_lo * s_mid < 0 ? RealPlace{R.lo, mid} : RealPlace{mid, R.hi};
  }

 private:
  int valuation_with(const Element& a, const FinitePlace& P) const
  {
    auto [b, den] = clear_denominator(a);
    Integer ell = from_u64(P.prime);
    int v = -P.e * stacky::valuation(den, ell);
    Integer content = 0;
    for (auto& x : b) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_mpz_t());
    int vc = stacky::valuation(content, ell);
    if (vc > 0) {
      Integer s = pow_int(ell, static_cast<unsigned long>(vc));
      for (auto& x : b) x /= s;
      v += P.e * vc;
    }
    while (true) {
      ZPoly t = mul_integral(b, P.anti);
      bool divisible = std::all_of(t.begin(), t.end(), [&](const Integer& x) {
        return mpz_divisible_p(x.get_mpz_t(), ell.get_mpz_t()) != 0;
      });
      if (!divisible) break;
      for (auto& x : t) x /= ell;
      b = std::move(t);
      ++v;
    }
    return v;
  }

  /* Product of integral elements, reduced by the monic integral f. */
  ZPoly mul_integral(const ZPoly& a, const ZPoly& b) const
  {
    ZPoly r(a.size() + b.size(), Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    for (int i = static_cast<int>(r.size()) - 1; i >= n_; --i) {
      if (r[i] == 0) continue;
      Integer c = r[i];
      for (int j = 0; j <= n_; ++j) r[i - n_ + j] -= c * f_[j];
    }
    r.resize(n_);
    return r;
  }

  void isolate(const std::vector<QPoly>& seq, const Rational& lo, const Rational& hi,
               std::vector<RealPlace>& out) const
  {
    int k = count_roots(seq, lo, hi);
    if (k == 0) return;
    if (k == 1) {
      // f has no rational roots (irreducible, n >= 2), so endpoints are not roots
      out.push_back({lo, hi});
      return;
    }
    Rational mid = (lo + hi) / 2;
    isolate(seq, lo, mid, out);
    isolate(seq, mid, hi, out);
  }

  /* Degree patterns modulo primes of good reduction, then an exhaustive
   * search for low-degree factors when the patterns are inconclusive. */
  void check_irreducible() const
  {
    if (n_ == 1) return;
    const Integer& c0 = f_[0];
    if (c0 == 0) throw Error(Errc::Reducible, poly_text() + " is divisible by x");
    for (auto& dv : divisors(c0))
      for (int s : {1, -1})
        if (poly_eval(fq_, Rational(dv * s)) == 0)
          throw Error(Errc::Reducible, poly_text() + " has the root " + Integer(dv * s).get_str());
    Integer disc = discriminant();
    if (disc == 0) throw Error(Errc::Reducible, poly_text() + " has a repeated factor");
    if (n_ <= 3) return;

    std::vector<bool> possible(n_ + 1, true);
    int good = 0;
    auto conclusive = [&] {
      for (int k = 1; k < n_; ++k)
        if (possible[k]) return false;
      return true;
    };
    for (u64 ell = 2; good < 40 && !conclusive(); ell = next_prime(ell)) {
      if (mpz_divisible_ui_p(disc.get_mpz_t(), ell)) continue;
      ++good;
      std::vector<bool> sums(n_ + 1, false);
      sums[0] = true;
      for (auto& fac : factor_mod(ell)) {
        int dg = Fp::deg(fac.factor);
        for (int s = n_; s >= dg; --s)
          if (sums[s - dg]) sums[s] = true;
      }
      for (int k = 0; k <= n_; ++k) possible[k] = possible[k] && sums[k];
      if (good >= 10 && n_ == 4) break;
    }
    if (conclusive()) return;
    if (n_ == 4) {
      if (has_quadratic_factor()) throw Error(Errc::Reducible, poly_text() + " has a quadratic factor");
      return;
    }
    throw Error(Errc::Unsupported, "could not establish irreducibility of " + poly_text());
  }

  /* Quartic f = (x^2+b x+c)(x^2+b' x+c') over Z. */
  bool has_quadratic_factor() const
  {
    const Integer &a0 = f_[0], &a1 = f_[1], &a2 = f_[2], &a3 = f_[3];
    for (auto& dv : divisors(a0)) {
      for (int s : {1, -1}) {
        Integer c = dv * s, c2 = a0 / c;
        if (c != c2) {
          Integer num = a1 - c * a3, den = c2 - c;
          if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) continue;
          Integer b = num / den, b2 = a3 - b;
          if (b * b2 + c + c2 == a2) return true;
        } else {
          if (a1 != c * a3) continue;
          Integer disc = a3 * a3 - 4 * (a2 - 2 * c), r;
          if (is_square(disc, &r) && mpz_even_p(Integer(a3 + r).get_mpz_t())) return true;
        }
      }
    }
    return false;
  }

  /* Dedekind's criterion: Z[theta] is maximal at ell iff
   * gcd(F, g, h) = 1 mod ell, where g = rad(f mod ell), h = (f mod ell)/g
   * and F = (G*H - f)/ell for lifts G, H. */
  bool maximal_with(u64 ell, const std::vector<FpFactor>& factors) const
  {
    Fp F(ell);
    FpPoly g{1}, h{1};
    for (auto& [fac, m] : factors) {
      g = F.mul(g, fac);
      for (int i = 1; i < m; ++i) h = F.mul(h, fac);
    }
    if (Fp::deg(h) == 0) return true;
    QPoly gh = poly_mul(to_qpoly(F.lift(g)), to_qpoly(F.lift(h)));
    QPoly diff = poly_sub(gh, fq_);
    Integer L = from_u64(ell);
    QPoly big_f;
    for (auto& c : diff) big_f.push_back(c / Rational(L));
    FpPoly fbar = F.reduce(big_f);
    FpPoly common = F.gcd(F.gcd(fbar, g), h);
    return Fp::deg(common) == 0;
  }

  struct PlaceCache {
    std::mutex mu;
    std::map<u64, std::vector<FinitePlace>> places;
  };
  std::shared_ptr<PlaceCache> cache_ = std::make_shared<PlaceCache>();
  ZPoly f_;
  QPoly fq_;
  int n_ = 0;
};

/* Parse "x^2+1" style text into a validated field. */
inline NumberField parse_field(const std::string& text)
{
  QPoly p = parse_poly(text, 'x');
  if (p.empty()) throw Error(Errc::ParseError, "zero polynomial");
  ZPoly z;
  for (auto& c : p) {
    if (c.get_den() != 1) throw Error(Errc::ParseError, "non-integer coefficient " + c.get_str());
    z.push_back(c.get_num());
  }
  return NumberField(z);
}

inline std::string place_name(const Place& v)
{
  if (auto* P = std::get_if<FinitePlace>(&v)) {
    QPoly g;
    for (auto c : P->local_factor) g.push_back(Rational(from_u64(c)));
    return "v[" + std::to_string(P->prime) + ", " + format_poly(g, 'x') + "]";
  }
  auto& R = std::get<RealPlace>(v);
  return "real[" + R.lo.get_str() + ", " + R.hi.get_str() + "]";
}

}  // namespace stacky

#endif
