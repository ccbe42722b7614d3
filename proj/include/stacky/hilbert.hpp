#ifndef STACKY_HILBERT_HPP
#define STACKY_HILBERT_HPP

/* Quadratic Hilbert symbols (a,b)_v and points on the conic
 * z^2 = a x^2 + b y^2 over completions and residue fields. */

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "stacky/localfield.hpp"

namespace stacky {

enum class HilbertValue { Minus = -1, Plus = 1 };

inline int to_int(HilbertValue h) { return static_cast<int>(h); }
inline HilbertValue hilbert_from_int(int s) { return s < 0 ? HilbertValue::Minus : HilbertValue::Plus; }

/* Projective point (x:y:z).  precision == 0 means the equation holds exactly
 * in K; otherwise it holds modulo P^precision at the finite place. */
struct ConicPoint {
  Element x, y, z;
  Place place;
  int precision = 0;
};

/* a x^2 + b y^2 - z^2 */
inline Element conic_form(const NumberField& K, const Element& a, const Element& b, const Element& x,
                          const Element& y, const Element& z)
{
  return K.sub(K.add(K.mul(a, K.mul(x, x)), K.mul(b, K.mul(y, y))), K.mul(z, z));
}

namespace detail {

inline void require_nonzero(const NumberField& K, const Element& a, const Element& b)
{
  if (K.is_zero(a) || K.is_zero(b)) throw Error(Errc::ZeroArgument, "Hilbert symbol with a zero argument");
}

inline bool primitive_at(const NumberField& K, const Element& x, const Element& y, const Element& z,
                         const FinitePlace& P)
{
  for (auto* c : {&x, &y, &z})
    if (!K.is_zero(*c) && K.valuation(*c, P) == 0) return true;
  return false;
}

/* Divide out pi^{2 floor(v/2)} so the valuation becomes 0 or 1; the square
 * class is unchanged. */
inline Element reduce_square_part(const NumberField& K, const Element& a, const FinitePlace& P)
{
  int v = K.valuation(a, P);
  int h = v >= 0 ? v / 2 : -((1 - v) / 2);
  return h == 0 ? a : K.mul(a, K.pow(P.uniformizer_inv, 2L * h));
}

}  // namespace detail

/* First primitive (x:y:z) with v_P(a x^2 + b y^2 - z^2) >= k, for P-integral
 * a, b.  The search runs over three normalized shapes in turn,
 * (1 : y : z), (x in P : 1 : z), (x in P : y in P : 1), filling in pi-adic
 * digits level by level.  Truncations of a solution are solutions at their
 * own level, so pruning on v_P(F) >= level loses nothing. */
inline std::optional<ConicPoint> search_conic_point(const NumberField& K, const Element& a, const Element& b,
                                                    const FinitePlace& P, int k)
{
  if (K.valuation(a, P) < 0 || K.valuation(b, P) < 0)
    throw Error(Errc::NegativeValuation, "conic coefficients must be integral at " + place_name(P));
  auto reps = residue_representatives(K, P);
  enum Mode { One, InP, Free };
  const std::array<std::array<Mode, 3>, 3> shapes{{{One, Free, Free}, {InP, One, Free}, {InP, InP, One}}};

  for (auto& shape : shapes) {
    std::optional<ConicPoint> found;
    std::function<void(std::array<Element, 3>&, const Element&, int)> go =
        [&](std::array<Element, 3>& c, const Element& pi_j, int j) {
          if (found) return;
          if (j == k) {
            found = ConicPoint{c[0], c[1], c[2], P, k};
            return;
          }
          std::array<std::vector<Element>, 3> digits;
          for (int i = 0; i < 3; ++i) {
            if (shape[i] == One)
              digits[i] = {j == 0 ? K.one() : K.zero()};
            else if (shape[i] == InP && j == 0)
              digits[i] = {K.zero()};
            else
              digits[i] = reps;
          }
          for (auto& dx : digits[0])
            for (auto& dy : digits[1])
              for (auto& dz : digits[2]) {
                std::array<Element, 3> next{K.add(c[0], K.mul(dx, pi_j)), K.add(c[1], K.mul(dy, pi_j)),
                                            K.add(c[2], K.mul(dz, pi_j))};
                if (!divisible_by_power(K, conic_form(K, a, b, next[0], next[1], next[2]), P, j + 1)) continue;
                go(next, K.mul(pi_j, P.uniformizer), j + 1);
                if (found) return;
              }
        };
    std::array<Element, 3> start{K.zero(), K.zero(), K.zero()};
    go(start, K.one(), 0);
    if (found) return found;
  }
  return std::nullopt;
}

/* Precision at which a primitive solution modulo P^k lifts, for a, b of
 * valuation 0 or 1: some partial derivative has valuation <= v_P(2) + 1. */
inline int conic_lift_precision(const NumberField& K, const FinitePlace& P)
{
  return 2 * two_valuation(K, P) + 3;
}

inline HilbertValue hilbert_symbol(const NumberField& K, const Element& a, const Element& b, const Place& v)
{
  detail::require_nonzero(K, a, b);
  if (auto* R = std::get_if<RealPlace>(&v)) {
    bool both_negative = sign_at(K, a, *R) == Sign::Negative && sign_at(K, b, *R) == Sign::Negative;
    return both_negative ? HilbertValue::Minus : HilbertValue::Plus;
  }
  const FinitePlace& P = std::get<FinitePlace>(v);
  if (P.prime != 2) {
    // tame symbol: chi((-1)^{alpha beta} u^beta w^alpha)
    ResidueField F(P);
    auto [alpha, u] = unit_part(K, a, P);
    auto [beta, w] = unit_part(K, b, P);
    int s = 1;
    if (alpha % 2 != 0 && beta % 2 != 0) s *= F.chi(F.neg(F.from_int(1)));
    if (beta % 2 != 0) s *= F.chi(residue_image(K, u, P));
    if (alpha % 2 != 0) s *= F.chi(residue_image(K, w, P));
    return hilbert_from_int(s);
  }
  Element a1 = detail::reduce_square_part(K, a, P);
  Element b1 = detail::reduce_square_part(K, b, P);
  bool solvable = search_conic_point(K, a1, b1, P, conic_lift_precision(K, P)).has_value();
  return solvable ? HilbertValue::Plus : HilbertValue::Minus;
}

inline bool conic_solvable_locally(const NumberField& K, const Element& p, const Element& q, const Place& v)
{
  return hilbert_symbol(K, p, q, v) == HilbertValue::Plus;
}

/* Exhaustive search over the residue field in the order (1:y:z), (0:1:z),
 * (0:0:1), each by residue index.  A ternary quadratic form over a finite
 * field always has a nontrivial zero, so failure is an internal error. */
inline ConicPoint conic_point_residue_field(const NumberField& K, const Element& p, const Element& q,
                                            const FinitePlace& P)
{
  ResidueField F(P);
  FpPoly pb = residue_image(K, p, P), qb = residue_image(K, q, P);
  u64 size = to_u64(F.size());
  auto holds = [&](const FpPoly& x, const FpPoly& y, const FpPoly& z) {
    return F.add(F.mul(pb, F.mul(x, x)), F.mul(qb, F.mul(y, y))) == F.mul(z, z);
  };
  auto point = [&](const FpPoly& x, const FpPoly& y, const FpPoly& z) {
    return ConicPoint{residue_lift(K, x), residue_lift(K, y), residue_lift(K, z), P, 1};
  };
  FpPoly one{1}, zero{};
  for (u64 i = 0; i < size; ++i)
    for (u64 j = 0; j < size; ++j) {
      FpPoly y = F.from_index(from_u64(i)), z = F.from_index(from_u64(j));
      if (holds(one, y, z)) return point(one, y, z);
    }
  for (u64 j = 0; j < size; ++j) {
    FpPoly z = F.from_index(from_u64(j));
    if (holds(zero, one, z)) return point(zero, one, z);
  }
  if (holds(zero, zero, one)) return point(zero, zero, one);
  throw Error(Errc::InternalInconsistency, "no residue point on the conic at " + place_name(P));
}

/* Every place where (a,b)_v can be -1: real places and the finite places
 * above 2 and above the primes where a or b is not a unit. */
inline std::vector<Place> symbol_support(const NumberField& K, const Element& a, const Element& b)
{
  std::set<Integer> primes{2};
  for (auto& x : {a, b})
    for (auto& ell : K.bad_primes(x)) primes.insert(ell);
  std::vector<Place> out;
  for (auto& ell : primes)
    for (auto& P : K.places_above(to_u64(ell))) out.emplace_back(P);
  for (auto& R : K.real_places()) out.emplace_back(R);
  return out;
}

inline bool product_formula_check(const NumberField& K, const Element& a, const Element& b)
{
  detail::require_nonzero(K, a, b);
  int product = 1;
  for (auto& v : symbol_support(K, a, b)) product *= to_int(hilbert_symbol(K, a, b, v));
  return product == 1;
}

}  // namespace stacky

#endif
