#ifndef STACKY_CERTIFY_HPP
#define STACKY_CERTIFY_HPP

/* On-disk form of a CounterexampleReport and a validator that re-derives
 * every claim from the bytes alone.
 *
 * Format (version "1"): JSON with sorted keys; integers are decimal
 * strings, rationals {"num","den"}, field elements arrays of decimal
 * coordinates in the power basis, places either
 * {"kind":"finite","prime","local_factor","e","d"} or
 * {"kind":"real","lo","hi"}. */

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "stacky/search.hpp"

namespace stacky {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad_field(const std::string& what) { throw Error(Errc::ParseError, what); }

inline Json int_json(const Integer& z) { return z.get_str(); }
inline Json int_json(long v) { return std::to_string(v); }
inline Json rational_json(const Rational& r) { return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}}; }

inline Json element_json(const Element& a)
{
  Json out = Json::array();
  for (auto& c : a.c) {
    if (c.get_den() != 1) bad_field("certificate elements must be integral");
    out.push_back(c.get_num().get_str());
  }
  return out;
}

inline Json fp_json(const FpPoly& a)
{
  Json out = Json::array();
  for (auto c : a) out.push_back(std::to_string(c));
  return out;
}

inline Json place_json(const Place& v)
{
  if (auto* P = std::get_if<FinitePlace>(&v))
    return {{"kind", "finite"},
            {"prime", std::to_string(P->prime)},
            {"local_factor", fp_json(P->local_factor)},
            {"e", int_json(P->e)},
            {"d", int_json(P->d)}};
  auto& R = std::get<RealPlace>(v);
  return {{"kind", "real"}, {"lo", rational_json(R.lo)}, {"hi", rational_json(R.hi)}};
}

inline Json square_json(const SquareClassCertificate& c)
{
  Json w = {{"kind", std::string(witness_kind_name(c.kind))}};
  switch (c.kind) {
    case WitnessKind::Root:
      w["root"] = element_json(c.root);
      w["precision"] = int_json(c.precision);
      w["valuation"] = int_json(c.valuation);
      break;
    case WitnessKind::OddValuation:
      w["valuation"] = int_json(c.valuation);
      break;
    case WitnessKind::ResidueNonsquare:
      w["residue"] = fp_json(c.residue);
      w["valuation"] = int_json(c.valuation);
      break;
    case WitnessKind::Exhaustive:
      w["precision"] = int_json(c.precision);
      w["valuation"] = int_json(c.valuation);
      break;
    case WitnessKind::RealSign:
      w["sign"] = int_json(c.sign);
      break;
  }
  return {{"value", element_json(c.value)},
          {"place", place_json(c.place)},
          {"verdict", c.verdict == SquareVerdict::Square ? "square" : "nonsquare"},
          {"witness", w}};
}

inline Json local_json(const LocalPointCertificate& c)
{
  return {{"place", place_json(c.place)},
          {"twist", c.twist == TwistChoice::Q ? "q" : "p"},
          {"t", element_json(c.t)},
          {"t_is_unit", c.t_is_unit},
          {"point",
           {{"x", element_json(c.point.x)},
            {"y", element_json(c.point.y)},
            {"z", element_json(c.point.z)},
            {"precision", int_json(c.point.precision)}}}};
}

/* ---- strict reading ---- */

inline const Json& member(const Json& j, const char* key)
{
  auto it = j.find(key);
  if (it == j.end()) bad_field(std::string("missing key \"") + key + "\"");
  return *it;
}

inline void expect_keys(const Json& j, std::initializer_list<const char*> keys, const char* where)
{
  if (!j.is_object()) bad_field(std::string(where) + " must be an object");
  std::set<std::string> want(keys.begin(), keys.end()), have;
  for (auto& [k, v] : j.items()) have.insert(k);
  if (want != have) bad_field(std::string("unexpected key set in ") + where);
}

inline const std::string& read_string(const Json& j, const char* what)
{
  if (!j.is_string()) bad_field(std::string(what) + " must be a string");
  return j.get_ref<const std::string&>();
}

inline Integer read_int(const Json& j, const char* what)
{
  Integer z;
  if (!parse_decimal(read_string(j, what), z)) bad_field(std::string(what) + " is not a decimal integer");
  return z;
}

inline int read_small(const Json& j, const char* what)
{
  Integer z = read_int(j, what);
  if (abs(z) > 1000000) bad_field(std::string(what) + " is out of range");
  return static_cast<int>(z.get_si());
}

inline Rational read_rational(const Json& j, const char* what)
{
  expect_keys(j, {"num", "den"}, what);
  Integer num = read_int(member(j, "num"), what), den = read_int(member(j, "den"), what);
  if (den <= 0) bad_field(std::string(what) + " has a non-positive denominator");
  Rational r(num, den);
  r.canonicalize();
  if (r.get_den() != den) bad_field(std::string(what) + " is not in lowest terms");
  return r;
}

inline Element read_element(const NumberField& K, const Json& j, const char* what)
{
  if (!j.is_array() || j.size() != static_cast<std::size_t>(K.degree()))
    bad_field(std::string(what) + " must have " + std::to_string(K.degree()) + " coordinates");
  Element a;
  for (auto& c : j) a.c.emplace_back(read_int(c, what));
  return a;
}

inline FpPoly read_fp(const Json& j, u64 ell, const char* what)
{
  if (!j.is_array()) bad_field(std::string(what) + " must be an array");
  FpPoly out;
  for (auto& c : j) {
    Integer z = read_int(c, what);
    if (z < 0 || z >= from_u64(ell)) bad_field(std::string(what) + " has a coefficient outside [0, ell)");
    out.push_back(to_u64(z));
  }
  if (!out.empty() && out.back() == 0) bad_field(std::string(what) + " has a zero leading coefficient");
  return out;
}

inline Place read_place(const NumberField& K, const Json& j)
{
  const std::string& kind = read_string(member(j, "kind"), "place kind");
  if (kind == "real") {
    expect_keys(j, {"kind", "lo", "hi"}, "real place");
    RealPlace R{read_rational(member(j, "lo"), "lo"), read_rational(member(j, "hi"), "hi")};
    for (auto& S : K.real_places())
      if (S == R) return R;
    bad_field("real place does not match an isolating interval of the field");
  }
  if (kind != "finite") bad_field("unknown place kind");
  expect_keys(j, {"kind", "prime", "local_factor", "e", "d"}, "finite place");
  Integer ell = read_int(member(j, "prime"), "prime");
  if (ell < 2 || ell > Integer(1000000000) || !is_prime(ell)) bad_field("place prime is not a supported prime");
  u64 l = to_u64(ell);
  FpPoly g = read_fp(member(j, "local_factor"), l, "local_factor");
  int e = read_small(member(j, "e"), "e"), d = read_small(member(j, "d"), "d");
  for (auto& P : K.places_above(l))
    if (P.local_factor == g) {
      if (P.e != e || P.d != d) bad_field("place " + place_name(P) + " has wrong e or d");
      return P;
    }
  bad_field("local factor does not divide the field polynomial");
}

inline FinitePlace read_finite_place(const NumberField& K, const Json& j)
{
  Place v = read_place(K, j);
  if (!is_finite(v)) bad_field("expected a finite place");
  return std::get<FinitePlace>(v);
}

inline SquareClassCertificate read_square(const NumberField& K, const Json& j)
{
  expect_keys(j, {"value", "place", "verdict", "witness"}, "square certificate");
  SquareClassCertificate c;
  c.value = read_element(K, member(j, "value"), "value");
  c.place = read_place(K, member(j, "place"));
  const std::string& verdict = read_string(member(j, "verdict"), "verdict");
  if (verdict != "square" && verdict != "nonsquare") bad_field("unknown verdict");
  c.verdict = verdict == "square" ? SquareVerdict::Square : SquareVerdict::Nonsquare;
  const Json& w = member(j, "witness");
  if (!w.is_object()) bad_field("witness must be an object");
  const std::string& kind = read_string(member(w, "kind"), "witness kind");
  if (kind == "root") {
    expect_keys(w, {"kind", "root", "precision", "valuation"}, "root witness");
    c.kind = WitnessKind::Root;
    c.root = read_element(K, member(w, "root"), "root");
    c.precision = read_small(member(w, "precision"), "precision");
    c.valuation = read_small(member(w, "valuation"), "valuation");
  } else if (kind == "odd_valuation") {
    expect_keys(w, {"kind", "valuation"}, "odd valuation witness");
    c.kind = WitnessKind::OddValuation;
    c.valuation = read_small(member(w, "valuation"), "valuation");
  } else if (kind == "residue_nonsquare") {
    expect_keys(w, {"kind", "residue", "valuation"}, "residue witness");
    c.kind = WitnessKind::ResidueNonsquare;
    if (!is_finite(c.place)) bad_field("residue witness at a real place");
    c.residue = read_fp(member(w, "residue"), std::get<FinitePlace>(c.place).prime, "residue");
    c.valuation = read_small(member(w, "valuation"), "valuation");
  } else if (kind == "exhaustive") {
    expect_keys(w, {"kind", "precision", "valuation"}, "exhaustive witness");
    c.kind = WitnessKind::Exhaustive;
    c.precision = read_small(member(w, "precision"), "precision");
    c.valuation = read_small(member(w, "valuation"), "valuation");
  } else if (kind == "real_sign") {
    expect_keys(w, {"kind", "sign"}, "sign witness");
    c.kind = WitnessKind::RealSign;
    c.sign = read_small(member(w, "sign"), "sign");
  } else {
    bad_field("unknown witness kind");
  }
  return c;
}

inline LocalPointCertificate read_local(const NumberField& K, const Json& j)
{
  expect_keys(j, {"place", "twist", "t", "t_is_unit", "point"}, "local point");
  LocalPointCertificate c;
  c.place = read_place(K, member(j, "place"));
  const std::string& tw = read_string(member(j, "twist"), "twist");
  if (tw != "p" && tw != "q") bad_field("twist must be \"p\" or \"q\"");
  c.twist = tw == "q" ? TwistChoice::Q : TwistChoice::P;
  c.t = read_element(K, member(j, "t"), "t");
  const Json& unit = member(j, "t_is_unit");
  if (!unit.is_boolean()) bad_field("t_is_unit must be a boolean");
  c.t_is_unit = unit.get<bool>();
  const Json& pt = member(j, "point");
  expect_keys(pt, {"x", "y", "z", "precision"}, "point");
  c.point = ConicPoint{read_element(K, member(pt, "x"), "x"), read_element(K, member(pt, "y"), "y"),
                       read_element(K, member(pt, "z"), "z"), c.place,
                       read_small(member(pt, "precision"), "point precision")};
  if (c.point.precision < 0) bad_field("negative point precision");
  return c;
}

}  // namespace detail

inline Json report_json(const CounterexampleReport& r)
{
  using namespace detail;
  Json field_poly = Json::array();
  for (auto& c : r.field.poly()) field_poly.push_back(c.get_str());
  Json units = Json::array(), unit_squares = Json::array(), entries = Json::array();
  for (auto& u : r.units) units.push_back(element_json(u));
  for (auto& c : r.global.unit_squares) unit_squares.push_back(square_json(c));
  for (auto& e : r.local.entries) entries.push_back(local_json(e));
  return {{"version", r.version},
          {"field", {{"min_poly", field_poly}}},
          {"profile",
           {{"N", int_json(r.N)}, {"unit_generators", units}, {"provenance", std::string(provenance_name(r.provenance))}}},
          {"pair", {{"p", element_json(r.p)}, {"q", element_json(r.q)}, {"place_of_p", place_json(r.place_of_p)}}},
          {"genus", rational_json(r.genus)},
          {"local_points", {{"entries", entries}, {"generic_rule", r.local.generic_rule}}},
          {"global_emptiness",
           {{"place", place_json(r.global.place)},
            {"unit_squares", unit_squares},
            {"q_nonsquare", square_json(r.global.q_nonsquare)},
            {"hilbert_symbol", int_json(to_int(r.global.symbol))}}}};
}

/* Canonical bytes: sorted keys, two-space indentation, trailing newline. */
inline std::string serialize_report(const CounterexampleReport& r) { return report_json(r).dump(2) + "\n"; }

inline Json parse_json(const std::string& bytes)
{
  Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::MalformedInput, "certificate is not valid JSON");
  return j;
}

/* Structural decoding.  Throws MalformedInput for bytes that are not JSON
 * and other errors (ParseError, field errors) for JSON of the wrong shape. */
inline CounterexampleReport report_from_json(const Json& j)
{
  using namespace detail;
  expect_keys(j, {"version", "field", "profile", "pair", "genus", "local_points", "global_emptiness"}, "report");
  if (read_string(member(j, "version"), "version") != "1") bad_field("unsupported format version");

  const Json& fj = member(j, "field");
  expect_keys(fj, {"min_poly"}, "field");
  const Json& coeffs = member(fj, "min_poly");
  if (!coeffs.is_array() || coeffs.size() < 2 || coeffs.size() > 65) bad_field("min_poly must list 2 to 65 coefficients");
  ZPoly f;
  for (auto& c : coeffs) f.push_back(read_int(c, "min_poly coefficient"));
  NumberField K(f);
  if (K.poly() != f) bad_field("min_poly has a zero leading coefficient");

  const Json& pj = member(j, "profile");
  expect_keys(pj, {"N", "unit_generators", "provenance"}, "profile");
  Integer N = read_int(member(pj, "N"), "N");
  const std::string& prov = read_string(member(pj, "provenance"), "provenance");
  if (prov != "computed" && prov != "user_supplied") bad_field("unknown provenance");
  const Json& uj = member(pj, "unit_generators");
  if (!uj.is_array()) bad_field("unit_generators must be an array");
  std::vector<Element> units;
  for (auto& u : uj) units.push_back(read_element(K, u, "unit generator"));

  const Json& pair = member(j, "pair");
  expect_keys(pair, {"p", "q", "place_of_p"}, "pair");
  Element p = read_element(K, member(pair, "p"), "p"), q = read_element(K, member(pair, "q"), "q");
  FinitePlace Pp = read_finite_place(K, member(pair, "place_of_p"));

  Rational g = read_rational(member(j, "genus"), "genus");

  const Json& lj = member(j, "local_points");
  expect_keys(lj, {"entries", "generic_rule"}, "local_points");
  LocalTable table;
  table.generic_rule = read_string(member(lj, "generic_rule"), "generic_rule");
  const Json& ej = member(lj, "entries");
  if (!ej.is_array()) bad_field("entries must be an array");
  for (auto& e : ej) table.entries.push_back(read_local(K, e));

  const Json& gj = member(j, "global_emptiness");
  expect_keys(gj, {"place", "unit_squares", "q_nonsquare", "hilbert_symbol"}, "global_emptiness");
  GlobalEmptinessCertificate glob;
  glob.N = N;
  glob.units = units;
  glob.place = read_finite_place(K, member(gj, "place"));
  const Json& sj = member(gj, "unit_squares");
  if (!sj.is_array()) bad_field("unit_squares must be an array");
  for (auto& s : sj) glob.unit_squares.push_back(read_square(K, s));
  glob.q_nonsquare = read_square(K, member(gj, "q_nonsquare"));
  int symbol = read_small(member(gj, "hilbert_symbol"), "hilbert_symbol");
  if (symbol != 1 && symbol != -1) bad_field("hilbert_symbol must be 1 or -1");
  glob.symbol = hilbert_from_int(symbol);

  return CounterexampleReport{"1",
                              K,
                              N,
                              units,
                              prov == "computed" ? Provenance::Computed : Provenance::UserSupplied,
                              p,
                              q,
                              Pp,
                              g,
                              std::move(table),
                              std::move(glob)};
}

inline CounterexampleReport deserialize_report(const std::string& bytes) { return report_from_json(parse_json(bytes)); }

struct ValidationResult {
  bool accepted = false;
  std::string reason;
};

namespace detail {

struct Rejection {
  std::string reason;
};

inline void require(bool ok, const std::string& reason)
{
  if (!ok) throw Rejection{reason};
}

/* Re-derive every claim of a decoded report from the field up. */
inline void check_report(const CounterexampleReport& r)
{
  const NumberField& K = r.field;
  require(K.degree() > 1 || K.poly() == ZPoly{0, 1}, "the rational field must be given as x");

  // profile
  require(r.N > 0, "N must be positive");
  require(!r.units.empty(), "no unit generators");
  for (auto& u : r.units) {
    require(K.is_integral(u), "unit generator " + K.format(u) + " is not integral");
    require(is_n_unit(K, u, r.N), K.format(u) + " is not a unit of O_K[1/N]");
  }
  bool matches_computed = false;
  if (K.degree() <= 2) {
    Integer N = trivializing_N(K);
    matches_computed = N == r.N && unit_generators(K, N) == r.units;
  }
  require((r.provenance == Provenance::Computed) == matches_computed,
          matches_computed ? "profile equals the computed one but is labelled user_supplied"
                           : "profile labelled computed differs from the computed profile");

  // the pair: odd coprime prime elements, p unramified and prime to N
  for (auto* x : {&r.p, &r.q}) {
    require(K.is_integral(*x) && !K.is_zero(*x), "p and q must be nonzero integral elements");
    require(!K.is_unit(*x), K.format(*x) + " is a unit");
  }
  auto vp = K.is_prime_element(r.p), vq = K.is_prime_element(r.q);
  require(vp.prime, K.format(r.p) + " is not a prime element");
  require(vq.prime, K.format(r.q) + " is not a prime element");
  const FinitePlace &P = *vp.place, &Q = *vq.place;
  require(P.prime != 2 && Q.prime != 2, "p and q must be odd");
  require(!(P == Q), "p and q must be coprime");
  require(P == r.place_of_p, "place_of_p is not the place of p");
  require(P.e == 1, "the place of p must be unramified");
  require(!mpz_divisible_ui_p(r.N.get_mpz_t(), P.prime) && !mpz_divisible_ui_p(r.N.get_mpz_t(), Q.prime),
          "p and q must be prime to N");

  // genus of [Y/mu_2]: coarse genus 0, two geometric points with stabilizer of order 2
  require(r.genus == genus(RamificationDatum{0, {{2, 1}, {2, 1}}}), "genus mismatch");

  // global emptiness at the place of p
  const auto& G = r.global;
  require(G.place == P, "global certificate is not at the place of p");
  require(G.N == r.N && G.units == r.units, "global certificate profile mismatch");
  require(G.unit_squares.size() == r.units.size(), "one square certificate per unit generator is required");
  for (std::size_t i = 0; i < r.units.size(); ++i) {
    const auto& c = G.unit_squares[i];
    require(c.value == r.units[i] && c.place == Place(P), "unit square certificate does not match its unit");
    require(c.verdict == SquareVerdict::Square, "unit " + K.format(r.units[i]) + " is not certified square");
    require(check_square_certificate(K, c), "square witness for " + K.format(r.units[i]) + " fails");
    require(c == is_square_at(K, r.units[i], P), "square witness for " + K.format(r.units[i]) + " is not canonical");
  }
  const auto& qc = G.q_nonsquare;
  auto fresh = is_square_at(K, r.q, P);
  require(fresh.verdict == SquareVerdict::Nonsquare,
          "nonsquare condition fails: " + K.format(r.q) + " is a square at " + place_name(P));
  require(qc.value == r.q && qc.place == Place(P), "nonsquare certificate is not for q at the place of p");
  require(qc.verdict == SquareVerdict::Nonsquare && check_square_certificate(K, qc), "nonsquare witness for q fails");
  require(qc == fresh, "nonsquare witness for q is not canonical");
  HilbertValue h = hilbert_symbol(K, r.p, r.q, P);
  require(h == HilbertValue::Minus, "Hilbert symbol (p,q) is +1 at the place of p");
  require(G.symbol == h, "recorded Hilbert symbol disagrees");

  // local points: every place of S = real places and places dividing 2pq
  std::vector<FinitePlace> finite = K.places_above(2);
  finite.push_back(P);
  finite.push_back(Q);
  std::sort(finite.begin(), finite.end());
  finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
  std::vector<Place> S(finite.begin(), finite.end());
  for (auto& R : K.real_places()) S.emplace_back(R);
  require(r.local.generic_rule == kGenericLocalRule, "unknown generic local rule");
  require(r.local.entries.size() == S.size(), "local table does not cover exactly the real places and those dividing 2pq");
  StackyCurveModel m{K, r.p, r.q, P, Q, true};
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto& e = r.local.entries[i];
    require(e.place == S[i], "local table entry " + std::to_string(i) + " is at the wrong place");
    require(check_local_point(m, e), "local point at " + place_name(e.place) + " fails substitution");
    require(e == local_point_certificate(m, e.place), "local point at " + place_name(e.place) + " is not canonical");
  }
}

}  // namespace detail

/* Accepted iff every embedded claim re-derives.  Bytes that are not JSON
 * raise MalformedInput; everything else yields a verdict. */
inline ValidationResult validate_report(const std::string& bytes)
{
  Json j = parse_json(bytes);
  try {
    CounterexampleReport r = report_from_json(j);
    detail::check_report(r);
  } catch (const detail::Rejection& e) {
    return {false, e.reason};
  } catch (const Error& e) {
    return {false, e.what()};
  } catch (const std::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  }
  return {true, ""};
}

}  // namespace stacky

#endif
