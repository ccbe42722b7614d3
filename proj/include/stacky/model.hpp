#ifndef STACKY_MODEL_HPP
#define STACKY_MODEL_HPP

/* The stacky curve X_(p,q) = [Y_(p,q) / mu_2], where Y_(p,q) is the conic
 * z^2 = p x^2 + q y^2 and mu_2 acts by z -> -z.  Integral points of X split
 * over the twists t z^2 = p x^2 + q y^2 indexed by unit square classes. */

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stacky/hilbert.hpp"

namespace stacky {

/* ---- genus ---- */

struct RamificationDatum {
  int coarse_genus = 0;
  std::vector<std::pair<int, int>> stacky_points;  // (stabilizer order, degree)
};

/* g = g_coarse + 1/2 sum (1 - 1/|G_P|) deg P */
inline Rational genus(const RamificationDatum& r)
{
  if (r.coarse_genus < 0) throw Error(Errc::PreconditionViolated, "negative coarse genus");
  Rational g = r.coarse_genus;
  for (auto [order, deg] : r.stacky_points) {
    if (order < 2 || deg < 1) throw Error(Errc::PreconditionViolated, "stacky points need order >= 2 and degree >= 1");
    g += Rational(1, 2) * (1 - Rational(1, order)) * deg;
  }
  g.canonicalize();
  return g;
}

/* ---- global squares ---- */

/* Whether x is a square in K.  Exact in degree <= 2.  In higher degree a
 * nonsquare is proved by a local obstruction; if none is found among the
 * first good primes the answer is std::nullopt. */
inline std::optional<bool> is_square_in_field(const NumberField& K, const Element& x)
{
  if (K.is_zero(x)) return true;
  if (K.degree() == 1) return is_square(x.c[0]);
  if (K.degree() == 2) {
    if (x.c[1] == 0) {
      Rational a = x.c[0];
      return is_square(a) || is_square(Rational(a * Rational(K.discriminant())));
    }
    // s^2 = x forces N(s) = n with n^2 = N(x), Tr(s)^2 = Tr(x) + 2n and s = (x + n) / Tr(s)
    Rational m;
    if (!is_square(K.norm(x), &m)) return false;
    for (const Rational& n : {m, Rational(-m)}) {
      Rational t;
      if (!is_square(Rational(K.trace(x) + 2 * n), &t) || t == 0) continue;
      Element s = K.scale(K.add(x, K.from_rational(n)), 1 / t);
      if (K.mul(s, s) == x) return true;
    }
    return false;
  }
  auto bad = K.bad_primes(x);
  int tested = 0;
  for (u64 ell = 3; tested < 60; ell = next_prime(ell)) {
    Integer L = from_u64(ell);
    if (std::find(bad.begin(), bad.end(), L) != bad.end() || !K.order_maximal_at(ell)) continue;
    for (auto& P : K.places_above(ell))
      if (is_square_at(K, x, P).verdict == SquareVerdict::Nonsquare) return false;
    ++tested;
  }
  for (auto& R : K.real_places())
    if (sign_at(K, x, R) == Sign::Negative) return false;
  return std::nullopt;
}

/* ---- models ---- */

struct StackyCurveModel {
  NumberField field;
  Element p, q;
  std::optional<FinitePlace> place_of_p, place_of_q;  // set for prime pairs
  bool prime_pair = true;
};

namespace detail {

inline std::vector<SupportEntry> model_support(const NumberField& K, const Element& a, const char* name)
{
  if (K.is_zero(a)) throw Error(Errc::InvalidModel, std::string(name) + " is zero");
  if (!K.is_integral(a)) throw Error(Errc::InvalidModel, std::string(name) + " = " + K.format(a) + " is not integral");
  return K.support(a);
}

inline void require_coprime(const NumberField& K, const Element& p, const Element& q)
{
  auto sp = model_support(K, p, "p"), sq = model_support(K, q, "q");
  for (auto& a : sp)
    for (auto& b : sq)
      if (a.place == b.place)
        throw Error(Errc::InvalidModel, K.format(p) + " and " + K.format(q) + " share " + place_name(a.place));
}

}  // namespace detail

/* Model for a pair of odd coprime prime elements. */
inline StackyCurveModel make_model(const NumberField& K, const Element& p, const Element& q)
{
  StackyCurveModel m{K, p, q, std::nullopt, std::nullopt, true};
  detail::require_coprime(K, p, q);
  for (auto [x, slot, name] : {std::tuple{&p, &m.place_of_p, "p"}, std::tuple{&q, &m.place_of_q, "q"}}) {
    if (K.is_unit(*x)) throw Error(Errc::InvalidModel, std::string(name) + " = " + K.format(*x) + " is a unit");
    auto verdict = K.is_prime_element(*x);
    if (!verdict.prime)
      throw Error(Errc::InvalidModel, std::string(name) + " = " + K.format(*x) + " is not a prime element");
    if (verdict.place->prime == 2)
      throw Error(Errc::InvalidModel, std::string(name) + " = " + K.format(*x) + " is not odd");
    *slot = verdict.place;
  }
  return m;
}

/* Coprime pair without primality, for local questions only. */
inline StackyCurveModel make_relaxed_model(const NumberField& K, const Element& p, const Element& q)
{
  detail::require_coprime(K, p, q);
  return StackyCurveModel{K, p, q, std::nullopt, std::nullopt, false};
}

/* Coarse space P^1 with the degree-2 branch locus z = 0, that is two
 * geometric points with stabilizer mu_2. */
inline RamificationDatum model_ramification(const StackyCurveModel&) { return {0, {{2, 1}, {2, 1}}}; }

inline Rational model_genus(const StackyCurveModel& m)
{
  if (!m.prime_pair) throw Error(Errc::InvalidModel, "genus needs a model built from a prime pair");
  return genus(model_ramification(m));
}

/* t z^2 = p x^2 + q y^2 */
struct TwistedConic {
  Element p, q, t;

  /* p x^2 + q y^2 - t z^2 */
  Element form(const NumberField& K, const Element& x, const Element& y, const Element& z) const
  {
    return K.sub(K.add(K.mul(p, K.mul(x, x)), K.mul(q, K.mul(y, y))), K.mul(t, K.mul(z, z)));
  }
};

inline TwistedConic twist(const NumberField& K, const StackyCurveModel& m, const Element& t)
{
  if (K.is_zero(t)) throw Error(Errc::DivisionByZero, "twist by zero");
  return TwistedConic{m.p, m.q, t};
}

/* ---- twist classes ---- */

/* Representatives of O_P^x / O_P^x2.  Odd places: 1 and the least nonsquare
 * residue.  Places above 2: units modulo P^{2 v_P(2) + 1} (where every unit
 * congruent to 1 is a square), enumerated as pi-adic digit strings with the
 * lowest digit varying fastest, keeping the first of each class. */
inline std::vector<Element> twist_classes_local(const NumberField& K, const FinitePlace& P)
{
  ResidueField F(P);
  if (P.prime != 2) {
    for (Integer i = 2;; ++i) {
      FpPoly r = F.from_index(i);
      if (F.chi(r) == -1) return {K.one(), residue_lift(K, r)};
    }
  }
  int m = 2 * two_valuation(K, P) + 1;
  auto reps = residue_representatives(K, P);
  std::vector<Element> pi_pow{K.one()};
  for (int j = 1; j < m; ++j) pi_pow.push_back(K.mul(pi_pow.back(), P.uniformizer));
  std::vector<std::size_t> digit(m, 0);
  digit[0] = 1;
  std::vector<Element> out;
  while (true) {
    Element u = K.zero();
    for (int j = 0; j < m; ++j) u = K.add(u, K.mul(reps[digit[j]], pi_pow[j]));
    bool fresh = true;
    for (auto& r : out)
      if (is_square_at(K, K.div(u, r), P).verdict == SquareVerdict::Square) {
        fresh = false;
        break;
      }
    if (fresh) out.push_back(u);
    int j = 0;
    for (; j < m; ++j) {
      if (++digit[j] < reps.size()) break;
      digit[j] = j == 0 ? 1 : 0;
    }
    if (j == m) break;
  }
  return out;
}

/* Representatives of R^x / R^x2 for R = O_K[1/N] with the given unit
 * generators: subset products in binary counting order, duplicates removed
 * by the global square test. */
inline std::vector<Element> twist_classes_global(const NumberField& K, const std::vector<Element>& units, bool pid)
{
  if (!pid) throw Error(Errc::NotPID, "twist classes need O_K[1/N] to be a principal ideal domain");
  if (units.size() > 20) throw Error(Errc::Unsupported, "too many unit generators");
  std::vector<Element> out;
  for (unsigned long mask = 0; mask < (1UL << units.size()); ++mask) {
    Element u = K.one();
    for (std::size_t i = 0; i < units.size(); ++i)
      if (mask >> i & 1) u = K.mul(u, units[i]);
    bool fresh = true;
    for (auto& r : out)
      if (is_square_in_field(K, K.div(u, r)).value_or(false)) {
        fresh = false;
        break;
      }
    if (fresh) out.push_back(u);
  }
  return out;
}

/* ---- local points ---- */

enum class TwistChoice { P, Q };

struct LocalPointCertificate {
  Place place;
  TwistChoice twist = TwistChoice::Q;
  Element t;
  ConicPoint point;
  bool t_is_unit = true;

  bool operator==(const LocalPointCertificate& o) const
  {
    return place == o.place && twist == o.twist && t == o.t && point.x == o.point.x && point.y == o.point.y &&
           point.z == o.point.z && point.precision == o.point.precision && t_is_unit == o.t_is_unit;
  }
};

/* Twist by q with (0:1:1) unless v divides q; then v does not divide p and
 * the twist by p has (1:0:1).  Both points are exact in K. */
inline LocalPointCertificate local_point_certificate(const StackyCurveModel& m, const Place& v)
{
  const NumberField& K = m.field;
  bool divides_q = false;
  if (auto* P = std::get_if<FinitePlace>(&v)) divides_q = K.valuation(m.q, *P) > 0;
  LocalPointCertificate c;
  c.place = v;
  if (!divides_q) {
    c.twist = TwistChoice::Q;
    c.t = m.q;
    c.point = ConicPoint{K.zero(), K.one(), K.one(), v, 0};
  } else {
    c.twist = TwistChoice::P;
    c.t = m.p;
    c.point = ConicPoint{K.one(), K.zero(), K.one(), v, 0};
  }
  if (auto* P = std::get_if<FinitePlace>(&v)) c.t_is_unit = K.valuation(c.t, *P) == 0;
  return c;
}

/* Substitution check of a local certificate against the model. */
inline bool check_local_point(const StackyCurveModel& m, const LocalPointCertificate& c)
{
  const NumberField& K = m.field;
  const Element& expected_t = c.twist == TwistChoice::Q ? m.q : m.p;
  if (c.t != expected_t || !(c.point.place == c.place)) return false;
  for (auto* x : {&c.point.x, &c.point.y, &c.point.z})
    if (x->c.size() != static_cast<std::size_t>(K.degree()) || !K.is_integral(*x)) return false;
  Element F = TwistedConic{m.p, m.q, c.t}.form(K, c.point.x, c.point.y, c.point.z);
  if (auto* P = std::get_if<FinitePlace>(&c.place)) {
    bool unit = K.valuation(c.t, *P) == 0;
    if (!unit || !c.t_is_unit) return false;
    if (!detail::primitive_at(K, c.point.x, c.point.y, c.point.z, *P)) return false;
    if (c.point.precision == 0) return K.is_zero(F);
    return divisible_by_power(K, F, *P, c.point.precision);
  }
  if (!c.t_is_unit || c.point.precision != 0) return false;
  bool nonzero = !K.is_zero(c.point.x) || !K.is_zero(c.point.y) || !K.is_zero(c.point.z);
  return nonzero && K.is_zero(F);
}

inline constexpr const char* kGenericLocalRule = "chevalley_warning_residue_point_hensel_lift";

struct LocalTable {
  std::vector<LocalPointCertificate> entries;
  std::string generic_rule = kGenericLocalRule;

  bool operator==(const LocalTable&) const = default;
};

/* S = real places and the finite places dividing 2pq. */
inline std::vector<Place> exceptional_places(const StackyCurveModel& m)
{
  const NumberField& K = m.field;
  std::vector<FinitePlace> finite = K.places_above(2);
  for (auto* x : {&m.p, &m.q})
    for (auto& s : K.support(*x)) finite.push_back(s.place);
  std::sort(finite.begin(), finite.end());
  finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
  std::vector<Place> out(finite.begin(), finite.end());
  for (auto& R : K.real_places()) out.emplace_back(R);
  return out;
}

inline LocalTable verify_local_everywhere(const StackyCurveModel& m, const std::vector<Place>& extra = {})
{
  std::vector<Place> places = exceptional_places(m);
  for (auto& v : extra)
    if (std::find(places.begin(), places.end(), v) == places.end()) places.push_back(v);
  std::stable_sort(places.begin(), places.end(), place_less);
  LocalTable table;
  for (auto& v : places) {
    auto c = local_point_certificate(m, v);
    if (!check_local_point(m, c))
      throw Error(Errc::InvalidModel, "no local point at " + place_name(v) + "; p and q must be coprime");
    table.entries.push_back(std::move(c));
  }
  return table;
}

/* ---- global emptiness ---- */

struct GlobalEmptinessCertificate {
  Integer N;
  std::vector<Element> units;
  FinitePlace place;
  std::vector<SquareClassCertificate> unit_squares;
  SquareClassCertificate q_nonsquare;
  HilbertValue symbol = HilbertValue::Plus;

  bool operator==(const GlobalEmptinessCertificate&) const = default;
};

struct GlobalVerdict {
  std::optional<GlobalEmptinessCertificate> certificate;  // set iff Empty
  std::string reason;                                     // why Inconclusive

  bool empty() const { return certificate.has_value(); }
};

/* Units of O_K[1/N] must have norm supported on the primes of N. */
inline bool is_n_unit(const NumberField& K, const Element& u, const Integer& N)
{
  if (K.is_zero(u)) return false;
  Rational n = K.norm(u);
  for (const Integer& part : {Integer(n.get_num()), Integer(n.get_den())}) {
    Integer rest = abs(part);
    for (auto& ell : prime_divisors(N))
      while (mpz_divisible_p(rest.get_mpz_t(), ell.get_mpz_t())) rest /= ell;
    if (rest != 1) return false;
  }
  return true;
}

inline GlobalVerdict verify_global_empty(const StackyCurveModel& m, const Integer& N, const std::vector<Element>& units)
{
  const NumberField& K = m.field;
  if (!m.prime_pair) throw Error(Errc::PreconditionViolated, "global check needs a prime pair");
  const FinitePlace& P = *m.place_of_p;
  if (P.prime == 2) throw Error(Errc::PreconditionViolated, "p must be odd");
  if (P.e > 1) throw Error(Errc::PreconditionViolated, "the place of p must be unramified");
  if (N <= 0) throw Error(Errc::PreconditionViolated, "N must be a positive integer");
  if (units.empty()) throw Error(Errc::PreconditionViolated, "unit generator list is empty");
  for (auto& ell : N == 1 ? std::vector<Integer>{} : prime_divisors(N))
    if (ell == from_u64(P.prime) || ell == from_u64(m.place_of_q->prime))
      throw Error(Errc::PreconditionViolated, "p and q must be prime to N");
  for (auto& u : units)
    if (!is_n_unit(K, u, N))
      throw Error(Errc::PreconditionViolated, K.format(u) + " is not a unit of O_K[1/" + N.get_str() + "]");

  GlobalEmptinessCertificate cert;
  cert.N = N;
  cert.units = units;
  cert.place = P;
  GlobalVerdict out;
  for (auto& u : units) {
    auto c = is_square_at(K, u, P);
    if (c.verdict != SquareVerdict::Square && out.reason.empty())
      out.reason = "unit " + K.format(u) + " is not a square at " + place_name(P);
    cert.unit_squares.push_back(std::move(c));
  }
  cert.q_nonsquare = is_square_at(K, m.q, P);
  cert.symbol = hilbert_symbol(K, m.p, m.q, P);
  bool q_nonsquare = cert.q_nonsquare.verdict == SquareVerdict::Nonsquare;
  // v_P(p) = 1 and q a P-unit, so (p,q)_P is the residue character of q
  if (q_nonsquare != (cert.symbol == HilbertValue::Minus))
    throw Error(Errc::InternalInconsistency, "square class of q and the Hilbert symbol disagree at " + place_name(P));
  if (!q_nonsquare && out.reason.empty()) out.reason = K.format(m.q) + " is a square at " + place_name(P);
  if (out.reason.empty()) out.certificate = std::move(cert);
  return out;
}

/* ---- report ---- */

enum class Provenance { Computed, UserSupplied };

inline std::string_view provenance_name(Provenance p) { return p == Provenance::Computed ? "computed" : "user_supplied"; }

struct CounterexampleReport {
  std::string version = "1";
  NumberField field;
  Integer N;
  std::vector<Element> units;
  Provenance provenance = Provenance::Computed;
  Element p, q;
  FinitePlace place_of_p;
  Rational genus;
  LocalTable local;
  GlobalEmptinessCertificate global;

  bool operator==(const CounterexampleReport& o) const
  {
    return version == o.version && field == o.field && N == o.N && units == o.units && provenance == o.provenance &&
           p == o.p && q == o.q && place_of_p == o.place_of_p && genus == o.genus && local == o.local &&
           global == o.global;
  }
};

inline CounterexampleReport build_counterexample_report(const StackyCurveModel& m, const Integer& N,
                                                        const std::vector<Element>& units,
                                                        Provenance provenance = Provenance::Computed)
{
  auto verdict = verify_global_empty(m, N, units);
  if (!verdict.empty()) throw Error(Errc::GlobalCheckInconclusive, verdict.reason);
  return CounterexampleReport{"1",
                              m.field,
                              N,
                              units,
                              provenance,
                              m.p,
                              m.q,
                              *m.place_of_p,
                              model_genus(m),
                              verify_local_everywhere(m),
                              std::move(*verdict.certificate)};
}

}  // namespace stacky

#endif
