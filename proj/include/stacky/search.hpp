#ifndef STACKY_SEARCH_HPP
#define STACKY_SEARCH_HPP

/* Field-level data needed before a counterexample can be certified: an N
 * with O_K[1/N] principal, generators of O_K[1/N]^x, and a scan for a prime
 * pair (p, q) with every unit generator a square at p and q a nonsquare
 * there. */

#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stacky/model.hpp"

namespace stacky {

/* ---- quadratic fields ---- */

namespace detail {

/* f = x^2 + c1 x + c0, D = c1^2 - 4 c0; N(a + b theta) = a^2 - c1 a b + c0 b^2. */
struct Quadratic {
  Integer c0, c1, D;
  bool imaginary() const { return D < 0; }
};

inline Quadratic quadratic_data(const NumberField& K)
{
  const ZPoly& f = K.poly();
  return {f[0], f[1], Integer(f[1] * f[1] - 4 * f[0])};
}

inline Element pair_element(const NumberField&, const Integer& a, const Integer& b)
{
  return Element{{Rational(a), Rational(b)}};
}

/* All a + b theta with N = n and |b| <= B. */
inline void elements_with_norm(const NumberField& K, const Quadratic& Q, const Integer& n, const Integer& B,
                               std::vector<Element>& out)
{
  for (Integer b = -B; b <= B; ++b) {
    Integer disc = Q.D * b * b + 4 * n, s;
    if (!is_square(disc, &s)) continue;
    for (const Integer& num : {Integer(Q.c1 * b - s), Integer(Q.c1 * b + s)}) {
      if (mpz_odd_p(num.get_mpz_t())) continue;
      Element a = pair_element(K, num / 2, b);
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
  }
}

inline long double embed_larger(const Quadratic& Q, const Element& a)
{
  long double root = (-Q.c1.get_d() + std::sqrt(static_cast<long double>(Q.D.get_d()))) / 2;
  return a.c[0].get_d() + a.c[1].get_d() * root;
}

/* Fundamental unit of a real quadratic Z[theta], normalized to exceed 1 at
 * the larger real root: the first continued-fraction convergent h/k of
 * theta_1 = (-c1 + sqrt D)/2 with N(h - k theta) = +-1. */
inline Element fundamental_unit(const NumberField& K, const Quadratic& Q)
{
  Integer s = isqrt(Q.D);
  Integer P = -Q.c1, Qd = 2;
  Integer h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  for (int iter = 0; iter < 100000; ++iter) {
    Integer num = P + s, a;
    if (Qd > 0) {
      mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Qd.get_mpz_t());
    } else {
      Integer absq = -Qd;
      mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), absq.get_mpz_t());
      a = -(a + 1);
    }
    Integer h = a * h1 + h2, k = a * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    if (k != 0) {
      Element u = pair_element(K, h, -k);
      if (abs(K.norm(u)) == 1) {
        RealPlace top = K.real_places().back();
        for (const Element& c : {u, K.neg(u), K.inv(u), K.neg(K.inv(u))})
          if (sign_at(K, K.sub(c, K.one()), top) == Sign::Positive) return c;
      }
    }
    P = a * Qd - P;
    Qd = (Q.D - P * P) / Qd;
  }
  throw Error(Errc::Unsupported, "fundamental unit not found for " + K.poly_text());
}

/* Units used to move between associates: the torsion of an imaginary
 * quadratic field, or +-eps^k for |k| <= 40 in a real one. */
inline std::vector<Element> associate_units(const NumberField& K, const Quadratic& Q)
{
  std::vector<Element> out;
  if (Q.imaginary()) {
    elements_with_norm(K, Q, 1, isqrt(Integer(4 / abs(Q.D))), out);
    return out;
  }
  Element eps = fundamental_unit(K, Q), inv = K.inv(eps), up = K.one(), down = K.one();
  out = {K.one(), K.neg(K.one())};
  for (int k = 1; k <= 40; ++k) {
    up = K.mul(up, eps);
    down = K.mul(down, inv);
    for (auto* u : {&up, &down}) {
      out.push_back(*u);
      out.push_back(K.neg(*u));
    }
  }
  return out;
}

inline int first_nonzero_sign(const Element& a)
{
  for (auto& c : a.c)
    if (c != 0) return sgn(c);
  return 0;
}

/* Canonical order on degree-2 associates: first nonzero coordinate
 * positive, then non-negative second coordinate as small as possible, then
 * the smallest first coordinate; negative second coordinates come last,
 * closest to zero first. */
inline bool associate_less(const Element& x, const Element& y)
{
  bool xn = x.c[1] >= 0, yn = y.c[1] >= 0;
  if (xn != yn) return xn;
  if (x.c[1] != y.c[1]) return xn ? x.c[1] < y.c[1] : x.c[1] > y.c[1];
  return x.c[0] < y.c[0];
}

/* Sublattice of Z^s kept in echelon form (pivots positive, strictly
 * increasing columns) for membership tests. */
class Lattice {
 public:
  explicit Lattice(std::size_t dim) : dim_(dim) {}

  bool contains(std::vector<Integer> v) const
  {
    std::size_t col = 0;
    for (auto& r : rows_) {
      std::size_t p = pivot(r);
      for (; col < p; ++col)
        if (v[col] != 0) return false;
      if (!mpz_divisible_p(v[p].get_mpz_t(), r[p].get_mpz_t())) return false;
      Integer c = v[p] / r[p];
      for (std::size_t j = p; j < dim_; ++j) v[j] -= c * r[j];
      col = p + 1;
    }
    for (; col < dim_; ++col)
      if (v[col] != 0) return false;
    return true;
  }

  void insert(const std::vector<Integer>& v)
  {
    rows_.push_back(v);
    std::size_t top = 0;
    for (std::size_t col = 0; col < dim_ && top < rows_.size(); ++col) {
      while (true) {
        std::size_t best = rows_.size();
        for (std::size_t i = top; i < rows_.size(); ++i)
          if (rows_[i][col] != 0 && (best == rows_.size() || abs(rows_[i][col]) < abs(rows_[best][col]))) best = i;
        if (best == rows_.size()) break;
        std::swap(rows_[top], rows_[best]);
        bool reduced = true;
        for (std::size_t i = top + 1; i < rows_.size(); ++i) {
          Integer c = rows_[i][col] / rows_[top][col];
          for (std::size_t j = col; j < dim_; ++j) rows_[i][j] -= c * rows_[top][j];
          if (rows_[i][col] != 0) reduced = false;
        }
        if (reduced) {
          if (rows_[top][col] < 0)
            for (auto& x : rows_[top]) x = -x;
          ++top;
          break;
        }
      }
    }
    rows_.resize(top);
  }

 private:
  std::size_t pivot(const std::vector<Integer>& r) const
  {
    std::size_t p = 0;
    while (r[p] == 0) ++p;
    return p;
  }

  std::size_t dim_;
  std::vector<std::vector<Integer>> rows_;
};

}  // namespace detail

/* Canonical representative of the associate class of a nonzero integral a. */
inline Element canonical_associate(const NumberField& K, const Element& a)
{
  if (K.is_zero(a)) throw Error(Errc::ZeroElement, "associate of zero");
  if (K.degree() != 2) return detail::first_nonzero_sign(a) < 0 ? K.neg(a) : a;
  auto Q = detail::quadratic_data(K);
  std::optional<Element> best;
  for (auto& u : detail::associate_units(K, Q)) {
    Element b = K.mul(a, u);
    if (detail::first_nonzero_sign(b) <= 0) continue;
    if (!best || detail::associate_less(b, *best)) best = b;
  }
  return *best;
}

/* ---- principal ideals ---- */

/* Search bound on the box of coordinates in degree > 2. */
inline int box_radius(int n) { return n <= 3 ? 3 : n == 4 ? 2 : 1; }

/* A generator of prod P^k over the given (place, exponent) pairs, as a
 * canonical associate, if one is found.  Exhaustive in degree <= 2 (in a
 * real quadratic field some generator has both conjugates bounded through
 * the fundamental unit); a bounded box search in higher degree. */
inline std::optional<Element> find_generator(const NumberField& K, const std::vector<std::pair<FinitePlace, int>>& ideal)
{
  Integer m = 1;
  for (auto& [P, k] : ideal) m *= pow_int(P.residue_size(), static_cast<unsigned long>(k));
  auto matches = [&](const Element& a) {
    if (K.is_zero(a) || abs(K.norm(a)) != m) return false;
    for (auto& [P, k] : ideal)
      if (K.valuation(a, P) != k) return false;
    return true;
  };
  if (K.degree() == 1) return K.from_rational(Rational(m));
  std::vector<Element> found;
  if (K.degree() == 2) {
    auto Q = detail::quadratic_data(K);
    if (Q.imaginary()) {
      detail::elements_with_norm(K, Q, m, isqrt(Integer(4 * m / abs(Q.D))), found);
    } else {
      long double eps = detail::embed_larger(Q, detail::fundamental_unit(K, Q));
      long double bound = std::sqrt(static_cast<long double>(m.get_d())) * (eps + 1) /
                          std::sqrt(static_cast<long double>(Q.D.get_d()));
      if (bound > 1e7) throw Error(Errc::Unsupported, "generator search region too large");
      Integer B = static_cast<long>(bound) + 1;
      detail::elements_with_norm(K, Q, m, B, found);
      detail::elements_with_norm(K, Q, Integer(-m), B, found);
    }
  } else {
    int r = box_radius(K.degree());
    std::vector<int> c(K.degree(), -r);
    while (true) {
      Element a = K.zero();
      for (int i = 0; i < K.degree(); ++i) a.c[i] = c[i];
      if (matches(a)) found.push_back(a);
      int i = 0;
      while (i < K.degree() && ++c[i] > r) c[i++] = -r;
      if (i == K.degree()) break;
    }
  }
  for (auto& a : found)
    if (matches(a)) return canonical_associate(K, a);
  return std::nullopt;
}

inline std::optional<Element> place_generator(const NumberField& K, const FinitePlace& P)
{
  return find_generator(K, {{P, 1}});
}

/* ---- profile ---- */

/* (n!/n^n) (4/pi)^{r2} sqrt|disc|, rounded up: pi -> 3.14 and the square
 * root taken upward to six decimals. */
inline Rational minkowski_bound(const NumberField& K)
{
  int n = K.degree();
  int r2 = (n - K.real_place_count()) / 2;
  Integer fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  Rational b(fact, pow_int(Integer(n), static_cast<unsigned long>(n)));
  for (int i = 0; i < r2; ++i) b *= Rational(400, 314);
  Integer scaled = abs(K.discriminant()) * pow_int(Integer(10), 12);
  Integer root = isqrt(scaled);
  if (root * root != scaled) root += 1;
  b *= Rational(root, pow_int(Integer(10), 6));
  b.canonicalize();
  return b;
}

inline void require_small_degree(const NumberField& K, const char* what)
{
  if (K.degree() > 2)
    throw Error(Errc::UnsupportedDegree,
                std::string(what) + " is only computed up to degree 2; supply a profile for " + K.poly_text());
}

/* Product of the primes below the Minkowski bound that carry a
 * non-principal place. */
inline Integer trivializing_N(const NumberField& K)
{
  require_small_degree(K, "the trivializing N");
  Integer N = 1;
  Rational bound = minkowski_bound(K);
  Integer top = bound.get_num() / bound.get_den();
  if (top < 2) return N;
  for (u64 ell : primes_up_to(to_u64(top))) {
    for (auto& P : K.places_above(ell))
      if (!place_generator(K, P)) {
        N *= from_u64(ell);
        break;
      }
  }
  return N;
}

/* Generators of O_K[1/N]^x: torsion and fundamental units, then for the
 * places S above N the generators of P^{k_P} (k_P the order of P in the
 * class group) and of every principal prod P^{x_P} with 0 <= x_P < k_P.
 * Any principal S-ideal reduces modulo the k_P into that box, so these
 * generate. */
inline std::vector<Element> unit_generators(const NumberField& K, const Integer& N)
{
  require_small_degree(K, "unit generators are");
  if (N <= 0) throw Error(Errc::PreconditionViolated, "N must be positive");
  std::vector<Element> out;
  if (K.degree() == 1) {
    out.push_back(K.from_int(-1));
  } else {
    auto Q = detail::quadratic_data(K);
    if (Q.imaginary()) {
      auto units = detail::associate_units(K, Q);
      std::vector<Element> gens{K.from_int(-1)};
      for (auto& u : units) {
        std::size_t order = 1;
        for (Element x = u; x != K.one(); x = K.mul(x, u)) ++order;
        if (order == units.size() && order > 2 && detail::first_nonzero_sign(u) > 0) gens.push_back(u);
      }
      // -1 when the torsion has order 2, else the canonical generator
      std::sort(gens.begin() + 1, gens.end(), detail::associate_less);
      out.push_back(gens.size() > 1 ? gens[1] : gens[0]);
    } else {
      out.push_back(K.from_int(-1));
      out.push_back(detail::fundamental_unit(K, Q));
    }
  }
  if (N == 1) return out;
  std::vector<FinitePlace> S;
  for (auto& ell : prime_divisors(N))
    for (auto& P : K.places_above(to_u64(ell))) S.push_back(P);
  std::vector<int> order;
  detail::Lattice principal(S.size());
  for (std::size_t j = 0; j < S.size(); ++j) {
    int k = 1;
    while (!find_generator(K, {{S[j], k}})) {
      if (++k > 64) throw Error(Errc::Unsupported, "class of " + place_name(S[j]) + " has order above 64");
    }
    order.push_back(k);
    std::vector<Integer> v(S.size(), 0);
    v[j] = k;
    principal.insert(v);
    out.push_back(*find_generator(K, {{S[j], k}}));
  }
  std::vector<int> x(S.size(), 0);
  while (true) {
    std::size_t i = 0;
    while (i < S.size() && ++x[i] >= order[i]) x[i++] = 0;
    if (i == S.size()) break;
    std::vector<Integer> v(x.begin(), x.end());
    if (principal.contains(v)) continue;
    std::vector<std::pair<FinitePlace, int>> ideal;
    for (std::size_t j = 0; j < S.size(); ++j)
      if (x[j] > 0) ideal.emplace_back(S[j], x[j]);
    if (auto g = find_generator(K, ideal)) {
      principal.insert(v);
      out.push_back(*g);
    }
  }
  return out;
}

struct FieldArithmeticProfile {
  NumberField field;
  Rational minkowski_bound;
  Integer N;
  std::vector<Element> unit_generators;
  Provenance provenance = Provenance::Computed;
};

inline FieldArithmeticProfile compute_profile(const NumberField& K)
{
  Integer N = trivializing_N(K);
  return {K, minkowski_bound(K), N, unit_generators(K, N), Provenance::Computed};
}

/* A profile given by the user: N > 0 and every generator an N-unit.  It is
 * labelled computed when it coincides with what compute_profile returns. */
inline FieldArithmeticProfile user_profile(const NumberField& K, const Integer& N, const std::vector<Element>& units)
{
  if (N <= 0) throw Error(Errc::PreconditionViolated, "profile N must be positive");
  if (units.empty()) throw Error(Errc::PreconditionViolated, "profile has no unit generators");
  for (auto& u : units) {
    if (u.c.size() != static_cast<std::size_t>(K.degree()) || !K.is_integral(u))
      throw Error(Errc::PreconditionViolated, "profile unit " + K.format(u) + " is not integral");
    if (!is_n_unit(K, u, N))
      throw Error(Errc::PreconditionViolated, "profile unit " + K.format(u) + " has norm outside the primes of N");
  }
  FieldArithmeticProfile prof{K, minkowski_bound(K), N, units, Provenance::UserSupplied};
  if (K.degree() <= 2) {
    auto computed = compute_profile(K);
    if (computed.N == N && computed.unit_generators == units) prof.provenance = Provenance::Computed;
  }
  return prof;
}

/* ---- prime pair search ---- */

inline unsigned default_thread_count()
{
  if (const char* env = std::getenv("STACKY_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/* Smallest i < n with eval(i) engaged, evaluating in parallel waves.  The
 * answer depends only on eval, not on scheduling. */
template <class T, class Eval>
std::optional<std::pair<std::size_t, T>> parallel_first(std::size_t n, unsigned threads, Eval eval)
{
  threads = std::max(1u, threads);
  std::size_t wave = static_cast<std::size_t>(threads) * 4;
  for (std::size_t start = 0; start < n; start += wave) {
    std::size_t end = std::min(n, start + wave);
    std::vector<std::optional<T>> results(end - start);
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](unsigned t) {
      try {
        for (std::size_t i = start + t; i < end; i += threads) results[i - start] = eval(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (std::size_t i = 0; i < results.size(); ++i)
      if (results[i]) return std::pair{start + i, std::move(*results[i])};
  }
  return std::nullopt;
}

struct PrimePair {
  Element p, q;
  FinitePlace place_of_p, place_of_q;
  std::vector<SquareClassCertificate> unit_squares;
  SquareClassCertificate q_nonsquare;
};

/* Candidates run over odd primes ell <= bound prime to N (and where Z[theta]
 * is maximal), then over the places above ell in local_factor order, each
 * represented by the canonical associate of a generator.  p ranges over
 * places of degree one and ramification one; q over every place other than
 * that of p. */
inline PrimePair find_prime_pair(const FieldArithmeticProfile& prof, const Integer& bound,
                                 unsigned threads = default_thread_count())
{
  const NumberField& K = prof.field;
  if (bound < 2) throw Error(Errc::PreconditionViolated, "search bound must be at least 2");
  if (prof.unit_generators.empty()) throw Error(Errc::PreconditionViolated, "profile has no unit generators");
  std::vector<u64> primes;
  for (u64 ell : primes_up_to(to_u64(bound))) {
    if (ell == 2 || mpz_divisible_ui_p(prof.N.get_mpz_t(), ell)) continue;
    if (!K.order_maximal_at(ell)) continue;
    primes.push_back(ell);
  }

  using Found = std::pair<Element, FinitePlace>;
  auto p_hit = parallel_first<Found>(primes.size(), threads, [&](std::size_t i) -> std::optional<Found> {
    for (auto& P : K.places_above(primes[i])) {
      if (P.e != 1 || P.d != 1) continue;
      bool all_square = true;
      for (auto& u : prof.unit_generators)
        if (is_square_at(K, u, P).verdict != SquareVerdict::Square) {
          all_square = false;
          break;
        }
      if (!all_square) continue;
      if (auto g = place_generator(K, P)) return Found{*g, P};
    }
    return std::nullopt;
  });
  if (!p_hit) throw Error(Errc::SearchExhausted, "no prime p up to " + bound.get_str());
  auto [p, Pp] = p_hit->second;

  auto q_hit = parallel_first<Found>(primes.size(), threads, [&](std::size_t i) -> std::optional<Found> {
    for (auto& P : K.places_above(primes[i])) {
      if (P == Pp) continue;
      auto g = place_generator(K, P);
      if (g && is_square_at(K, *g, Pp).verdict == SquareVerdict::Nonsquare) return Found{*g, P};
    }
    return std::nullopt;
  });
  if (!q_hit) throw Error(Errc::SearchExhausted, "no prime q up to " + bound.get_str() + " for p = " + K.format(p));
  auto [q, Pq] = q_hit->second;

  PrimePair out{p, q, Pp, Pq, {}, is_square_at(K, q, Pp)};
  for (auto& u : prof.unit_generators) out.unit_squares.push_back(is_square_at(K, u, Pp));
  for (auto& c : out.unit_squares)
    if (!check_square_certificate(K, c) || c.verdict != SquareVerdict::Square)
      throw Error(Errc::InternalInconsistency, "unit square certificate failed to re-verify");
  if (!check_square_certificate(K, out.q_nonsquare) || out.q_nonsquare.verdict != SquareVerdict::Nonsquare)
    throw Error(Errc::InternalInconsistency, "nonsquare certificate for q failed to re-verify");
  return out;
}

}  // namespace stacky

#endif
