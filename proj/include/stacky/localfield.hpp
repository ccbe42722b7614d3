#ifndef STACKY_LOCALFIELD_HPP
#define STACKY_LOCALFIELD_HPP

/* Local arithmetic at a place of K without materializing completions: every
 * computation happens in O_K/P^k for an explicit k, or on an isolating
 * interval for real places. */

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stacky/numfield.hpp"

namespace stacky {

/* The residue field F_ell[x]/(g) of a finite place. Elements are reduced
 * polynomials of degree < d. */
class ResidueField {
 public:
  explicit ResidueField(const FinitePlace& P) : F_(P.prime), g_(P.local_factor), d_(P.d)
  {
    size_ = P.residue_size();
  }

  u64 characteristic() const { return F_.prime(); }
  int degree() const { return d_; }
  const Integer& size() const { return size_; }

  FpPoly reduce(const FpPoly& a) const { return F_.mod(a, g_); }
  FpPoly add(const FpPoly& a, const FpPoly& b) const { return F_.add(a, b); }
  FpPoly sub(const FpPoly& a, const FpPoly& b) const { return F_.sub(a, b); }
  FpPoly neg(const FpPoly& a) const { return F_.sub(FpPoly{}, a); }
  FpPoly mul(const FpPoly& a, const FpPoly& b) const { return F_.mulmod_poly(a, b, g_); }
  FpPoly pow(const FpPoly& a, const Integer& e) const { return F_.powmod_poly(a, e, g_); }
  FpPoly from_int(u64 v) const { return reduce(FpPoly{v % F_.prime()}); }
  bool is_one(const FpPoly& a) const { return a == FpPoly{1}; }

  FpPoly inv(const FpPoly& a) const
  {
    if (a.empty()) throw Error(Errc::DivisionByZero, "inverse of 0 in residue field");
    return pow(a, size_ - 2);
  }

  /* Quadratic character; 0 for the zero element. */
  int chi(const FpPoly& a) const
  {
    if (a.empty()) return 0;
    if (F_.prime() == 2) return 1;
    return is_one(pow(a, (size_ - 1) / 2)) ? 1 : -1;
  }

  /* Base-ell digit index, the canonical order on residue elements. */
  Integer index(const FpPoly& a) const
  {
    Integer r = 0, L = from_u64(F_.prime());
    for (int i = Fp::deg(a); i >= 0; --i) r = r * L + from_u64(a[i]);
    return r;
  }

  FpPoly from_index(Integer idx) const
  {
    FpPoly r;
    Integer L = from_u64(F_.prime());
    while (idx > 0) {
      r.push_back(to_u64(Integer(idx % L)));
      idx /= L;
    }
    Fp::trim(r);
    return r;
  }

  /* A square root of a square (Tonelli-Shanks; Frobenius inverse in
   * characteristic 2), normalized to the smaller index of {r, -r}. */
  std::optional<FpPoly> sqrt(const FpPoly& a) const
  {
    if (a.empty()) return FpPoly{};
    if (F_.prime() == 2) return pow(a, size_ / 2);
    if (chi(a) != 1) return std::nullopt;
    Integer t = size_ - 1;
    unsigned long s = 0;
    while (mpz_even_p(t.get_mpz_t())) {
      t /= 2;
      ++s;
    }
    FpPoly z;
    for (Integer i = 2;; ++i) {
      z = from_index(i);
      if (chi(z) == -1) break;
    }
    FpPoly c = pow(z, t), x = pow(a, (t + 1) / 2), b = pow(a, t);
    unsigned long m = s;
    while (!is_one(b)) {
      unsigned long i = 0;
      FpPoly bb = b;
      while (!is_one(bb)) {
        bb = mul(bb, bb);
        ++i;
      }
      FpPoly w = c;
      for (unsigned long j = 0; j + 1 < m - i; ++j) w = mul(w, w);
      x = mul(x, w);
      c = mul(w, w);
      b = mul(b, c);
      m = i;
    }
    FpPoly other = neg(x);
    return index(other) < index(x) ? other : x;
  }

 private:
  Fp F_;
  FpPoly g_;
  int d_;
  Integer size_;
};

/* Lift of a residue element: sum c_i theta^i with 0 <= c_i < ell. */
inline Element residue_lift(const NumberField& K, const FpPoly& r)
{
  Element a = K.zero();
  for (std::size_t i = 0; i < r.size(); ++i) a.c[i] = Rational(from_u64(r[i]));
  return a;
}

namespace detail {

/* Image of an ell-integral element (coordinate denominators prime to ell). */
inline FpPoly reduce_ell_integral(const Element& a, const FinitePlace& P)
{
  FpPoly r;
  for (auto& x : a.c) r.push_back(reduce_mod(x, P.prime));
  Fp::trim(r);
  return ResidueField(P).reduce(r);
}

}  // namespace detail

inline int valuation_at(const NumberField& K, const Element& a, const FinitePlace& P)
{
  return K.valuation(a, P);
}

/* Image of a in O_K/P.  Writing a = b/(ell^m d') with b in Z[theta], the
 * ell-power is cancelled through b/pi^{me} and eps = ell/pi^e, both of which
 * are ell-integral. */
inline FpPoly residue_image(const NumberField& K, const Element& a, const FinitePlace& P)
{
  if (K.is_zero(a)) return {};
  int v = K.valuation(a, P);
  if (v < 0) throw Error(Errc::NegativeValuation, K.format(a) + " has valuation " + std::to_string(v));
  if (v > 0) return {};
  ResidueField R(P);
  auto [b, den] = K.clear_denominator(a);
  Integer ell = from_u64(P.prime);
  int m = valuation(den, ell);
  Integer rest = den / pow_int(ell, static_cast<unsigned long>(m));
  Element c = K.mul(K.from_zpoly(b), K.pow(P.uniformizer_inv, static_cast<long>(m) * P.e));
  FpPoly r = detail::reduce_ell_integral(c, P);
  if (m > 0) {
    FpPoly eps = detail::reduce_ell_integral(P.eps, P);
    r = R.mul(r, R.inv(R.pow(eps, Integer(m))));
  }
  return R.mul(r, R.inv(R.from_int(reduce_mod(rest, P.prime))));
}

/* Decomposition a = pi^v * u with u a P-unit. */
struct UnitPart {
  int valuation;
  Element unit;
};

inline UnitPart unit_part(const NumberField& K, const Element& a, const FinitePlace& P)
{
  int v = K.valuation(a, P);
  return {v, K.mul(a, K.pow(P.uniformizer_inv, v))};
}

/* True when v_P(x) >= k (zero counts as infinitely divisible). */
inline bool divisible_by_power(const NumberField& K, const Element& x, const FinitePlace& P, int k)
{
  return K.is_zero(x) || K.valuation(x, P) >= k;
}

/* Lifts of all residue elements, in canonical index order. */
inline std::vector<Element> residue_representatives(const NumberField& K, const FinitePlace& P)
{
  ResidueField R(P);
  std::vector<Element> out;
  u64 count = to_u64(R.size());
  for (u64 i = 0; i < count; ++i) out.push_back(residue_lift(K, R.from_index(from_u64(i))));
  return out;
}

inline int two_valuation(const NumberField& K, const FinitePlace& P)
{
  return P.prime == 2 ? K.valuation(K.from_int(2), P) : 0;
}

/* Relative precision carried by square witnesses: the residue field alone
 * decides at odd places; at places above 2 the congruence is checked modulo
 * P^{2 e v_P(2) + 3}, past the Hensel bound 2 v_P(2) + 1. */
inline int square_witness_precision(const NumberField& K, const FinitePlace& P)
{
  if (P.prime != 2) return 1;
  return 2 * P.e * two_valuation(K, P) + 3;
}

/* Depth-first search for s = sum_{j<k} r_j pi^j with v_P(s^2 - u) >= k and
 * r_0 != 0.  Every truncation of a solution is a solution at its own depth,
 * so pruning on v_P(s_j^2 - u) >= j is exhaustive.  Among all solutions the
 * one with the smallest digit string, most significant digit first, is
 * returned (over Q that is the least root in [0, 2^k)). */
inline std::optional<Element> sqrt_mod_power(const NumberField& K, const Element& u, const FinitePlace& P, int k)
{
  auto reps = residue_representatives(K, P);
  std::optional<Element> best;
  std::vector<std::size_t> digits, best_digits;
  auto better = [&] {
    for (int j = k - 1; j >= 0; --j)
      if (digits[j] != best_digits[j]) return digits[j] < best_digits[j];
    return false;
  };
  std::function<void(const Element&, const Element&, int)> go = [&](const Element& s, const Element& pi_j, int j) {
    if (j == k) {
      if (!best || better()) {
        best = s;
        best_digits = digits;
      }
      return;
    }
    for (std::size_t i = (j == 0 ? 1 : 0); i < reps.size(); ++i) {
      Element t = K.add(s, K.mul(reps[i], pi_j));
      if (!divisible_by_power(K, K.sub(K.mul(t, t), u), P, j + 1)) continue;
      digits.push_back(i);
      go(t, K.mul(pi_j, P.uniformizer), j + 1);
      digits.pop_back();
    }
  };
  go(K.zero(), K.one(), 0);
  return best;
}

enum class SquareVerdict { Square, Nonsquare };

enum class WitnessKind {
  Root,              // v_P(root^2 - value) >= v_P(value) + precision
  OddValuation,      // v_P(value) is odd
  ResidueNonsquare,  // unit part has a nonsquare residue (odd places)
  Exhaustive,        // no root modulo P^precision (places above 2)
  RealSign,          // sign under the real embedding
};

inline std::string_view witness_kind_name(WitnessKind k)
{
  switch (k) {
    case WitnessKind::Root: return "root";
    case WitnessKind::OddValuation: return "odd_valuation";
    case WitnessKind::ResidueNonsquare: return "residue_nonsquare";
    case WitnessKind::Exhaustive: return "exhaustive";
    case WitnessKind::RealSign: return "real_sign";
  }
  return "unknown";
}

struct SquareClassCertificate {
  Element value;
  Place place;
  SquareVerdict verdict = SquareVerdict::Nonsquare;
  WitnessKind kind = WitnessKind::Root;
  Element root;       // Root
  int precision = 0;  // Root, Exhaustive
  int valuation = 0;  // OddValuation, ResidueNonsquare, Root
  FpPoly residue;     // ResidueNonsquare
  int sign = 0;       // RealSign

  bool operator==(const SquareClassCertificate&) const = default;
};

enum class Sign { Negative = -1, Positive = 1 };

/* Sign of a under the embedding of R: shrink the isolating interval until
 * a, read as a polynomial, has no root on it. */
inline Sign sign_at(const NumberField& K, const Element& a, RealPlace R)
{
  if (K.is_zero(a)) throw Error(Errc::ZeroElement, "sign of zero");
  QPoly p = K.to_poly(a);
  if (degree(p) == 0) return sgn(p[0]) > 0 ? Sign::Positive : Sign::Negative;
  if (R.lo == R.hi) return sgn(poly_eval(p, R.lo)) > 0 ? Sign::Positive : Sign::Negative;
  auto seq = sturm_sequence(poly_monic(poly_divmod(p, poly_gcd(p, poly_derivative(p))).first));
  while (true) {
    Rational at_lo = poly_eval(p, R.lo), at_hi = poly_eval(p, R.hi);
    if (at_lo != 0 && at_hi != 0 && count_roots(seq, R.lo, R.hi) == 0)
      return sgn(at_lo) > 0 ? Sign::Positive : Sign::Negative;
    R = K.refine(R);
    if (R.lo == R.hi) return sgn(poly_eval(p, R.lo)) > 0 ? Sign::Positive : Sign::Negative;
  }
}

inline SquareClassCertificate is_square_at(const NumberField& K, const Element& a, const Place& v)
{
  if (K.is_zero(a)) throw Error(Errc::ZeroElement, "square test of zero");
  SquareClassCertificate c;
  c.value = a;
  c.place = v;
  if (auto* R = std::get_if<RealPlace>(&v)) {
    c.kind = WitnessKind::RealSign;
    c.sign = static_cast<int>(sign_at(K, a, *R));
    c.verdict = c.sign > 0 ? SquareVerdict::Square : SquareVerdict::Nonsquare;
    return c;
  }
  const FinitePlace& P = std::get<FinitePlace>(v);
  auto [val, u] = unit_part(K, a, P);
  c.valuation = val;
  if (val % 2 != 0) {
    c.kind = WitnessKind::OddValuation;
    return c;
  }
  Element half = K.pow(P.uniformizer, val / 2);
  if (P.prime != 2) {
    ResidueField R(P);
    FpPoly r = residue_image(K, u, P);
    auto root = R.sqrt(r);
    if (!root) {
      c.kind = WitnessKind::ResidueNonsquare;
      c.residue = r;
      return c;
    }
    c.verdict = SquareVerdict::Square;
    c.kind = WitnessKind::Root;
    c.precision = 1;
    c.root = K.mul(residue_lift(K, *root), half);
    return c;
  }
  int k = square_witness_precision(K, P);
  c.precision = k;
  if (auto s = sqrt_mod_power(K, u, P, k)) {
    c.verdict = SquareVerdict::Square;
    c.kind = WitnessKind::Root;
    c.root = K.mul(*s, half);
  } else {
    c.kind = WitnessKind::Exhaustive;
  }
  return c;
}

/* Re-check a certificate using only its own data and the place. */
inline bool check_square_certificate(const NumberField& K, const SquareClassCertificate& c)
{
  if (K.is_zero(c.value)) return false;
  if (auto* R = std::get_if<RealPlace>(&c.place)) {
    if (c.kind != WitnessKind::RealSign) return false;
    int s = static_cast<int>(sign_at(K, c.value, *R));
    return s == c.sign && (c.verdict == SquareVerdict::Square) == (s > 0);
  }
  const FinitePlace& P = std::get<FinitePlace>(c.place);
  int val = K.valuation(c.value, P);
  switch (c.kind) {
    case WitnessKind::Root: {
      if (c.verdict != SquareVerdict::Square || val % 2 != 0 || c.valuation != val) return false;
      if (c.precision != square_witness_precision(K, P)) return false;
      Element diff = K.sub(K.mul(c.root, c.root), c.value);
      return divisible_by_power(K, diff, P, val + c.precision);
    }
    case WitnessKind::OddValuation:
      return c.verdict == SquareVerdict::Nonsquare && val == c.valuation && val % 2 != 0;
    case WitnessKind::ResidueNonsquare: {
      if (c.verdict != SquareVerdict::Nonsquare || P.prime == 2 || val % 2 != 0 || c.valuation != val)
        return false;
      FpPoly r = residue_image(K, unit_part(K, c.value, P).unit, P);
      return r == c.residue && ResidueField(P).chi(r) == -1;
    }
    case WitnessKind::Exhaustive: {
      if (c.verdict != SquareVerdict::Nonsquare || P.prime != 2 || val % 2 != 0 || c.valuation != val)
        return false;
      if (c.precision != square_witness_precision(K, P)) return false;
      return !sqrt_mod_power(K, unit_part(K, c.value, P).unit, P, c.precision).has_value();
    }
    case WitnessKind::RealSign:
      return false;
  }
  return false;
}

}  // namespace stacky

#endif
