#include <gtest/gtest.h>

#include "support.hpp"

using namespace stacky;
using namespace stacky::test;

namespace {

Errc code_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::InternalInconsistency;
}

long legendre(long a, long p)
{
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  for (long x = 1; x < p; ++x)
    if (x * x % p == a) return 1;
  return -1;
}

}  // namespace

TEST(Minkowski, Examples)
{
  EXPECT_EQ(minkowski_bound(parse_field("x")), 1);
  Rational b5 = minkowski_bound(parse_field("x^2+5"));
  EXPECT_LT(b5, Rational(285, 100));
  EXPECT_GT(b5, 2);
  Rational bi = minkowski_bound(parse_field("x^2+1"));
  EXPECT_LT(bi, Rational(128, 100));
  EXPECT_GE(bi, 1);
}

TEST(TrivializingN, Examples)
{
  EXPECT_EQ(trivializing_N(parse_field("x")), 1);
  EXPECT_EQ(trivializing_N(parse_field("x^2+1")), 1);
  EXPECT_EQ(trivializing_N(parse_field("x^2+5")), 2);
  EXPECT_EQ(trivializing_N(parse_field("x^2-x-1")), 1);
  EXPECT_EQ(code_of([] { trivializing_N(parse_field("x^3-2")); }), Errc::UnsupportedDegree);
}

TEST(UnitGenerators, Examples)
{
  NumberField Q = parse_field("x"), K = parse_field("x^2+1"), G = parse_field("x^2-x-1");
  EXPECT_EQ(unit_generators(Q, 1), (std::vector<Element>{Q.from_int(-1)}));
  EXPECT_EQ(unit_generators(Q, 6), (std::vector<Element>{Q.from_int(-1), Q.from_int(2), Q.from_int(3)}));
  EXPECT_EQ(unit_generators(K, 1), (std::vector<Element>{K.theta()}));
  EXPECT_EQ(unit_generators(G, 1), (std::vector<Element>{G.from_int(-1), G.theta()}));
  EXPECT_EQ(code_of([] { unit_generators(parse_field("x^3-2"), 1); }), Errc::UnsupportedDegree);
}

TEST(UnitGenerators, NormsAreNUnits)
{
  for (auto& fs : {"x", "x^2+1", "x^2+5", "x^2-x-1", "x^2-10", "x^2+x+6", "x^2-2"}) {
    NumberField K = parse_field(fs);
    auto prof = compute_profile(K);
    EXPECT_EQ(prof.provenance, Provenance::Computed);
    for (auto& u : prof.unit_generators) {
      ASSERT_TRUE(K.is_integral(u));
      ASSERT_TRUE(is_n_unit(K, u, prof.N)) << fs << " " << K.format(u);
    }
  }
}

TEST(FundamentalUnit, RealQuadratic)
{
  NumberField K = parse_field("x^2-2");
  auto units = unit_generators(K, 1);
  ASSERT_EQ(units.size(), 2u);
  EXPECT_EQ(units[1], el(K, "1+t"));
  NumberField L = parse_field("x^2-7");
  EXPECT_EQ(unit_generators(L, 1)[1], el(L, "8+3*t"));
}

TEST(PrimePair, Examples)
{
  auto q = compute_profile(parse_field("x"));
  auto pr = find_prime_pair(q, 100);
  EXPECT_EQ(pr.p, q.field.from_int(5));
  EXPECT_EQ(pr.q, q.field.from_int(3));

  NumberField K = parse_field("x^2+1");
  auto pk = find_prime_pair(compute_profile(K), 100);
  EXPECT_EQ(K.norm(pk.p), 17);
  EXPECT_EQ(pk.q, K.from_int(3));

  EXPECT_EQ(code_of([&] { find_prime_pair(q, 3); }), Errc::SearchExhausted);
  EXPECT_EQ(code_of([&] { find_prime_pair(q, 1); }), Errc::PreconditionViolated);
}

TEST(PrimePair, UserProfileOverride)
{
  NumberField C = parse_field("x^3-2");
  auto prof = user_profile(C, 1, {C.from_int(-1), el(C, "t-1")});
  EXPECT_EQ(prof.provenance, Provenance::UserSupplied);
  auto pr = find_prime_pair(prof, 200);
  auto m = make_model(C, pr.p, pr.q);
  EXPECT_TRUE(verify_global_empty(m, prof.N, prof.unit_generators).empty());
  EXPECT_EQ(code_of([&] { user_profile(C, 1, {C.from_int(2)}); }), Errc::PreconditionViolated);
  NumberField Q = parse_field("x");
  EXPECT_EQ(user_profile(Q, 1, {Q.from_int(-1)}).provenance, Provenance::Computed);
  EXPECT_EQ(user_profile(Q, 2, {Q.from_int(-1), Q.from_int(2)}).provenance, Provenance::UserSupplied);
}

TEST(Property, PairsPassTheGlobalCheck)
{
  for (auto& fs : {"x", "x^2+1", "x^2-x-1", "x^2+5", "x^2+2", "x^2-2", "x^2+x+6"}) {
    NumberField K = parse_field(fs);
    auto prof = compute_profile(K);
    auto pr = find_prime_pair(prof, std::string(fs) == "x^2+x+6" ? 5000 : 1000);
    auto m = make_model(K, pr.p, pr.q);
    auto v = verify_global_empty(m, prof.N, prof.unit_generators);
    ASSERT_TRUE(v.empty()) << fs << ": " << v.reason;
    for (auto& c : pr.unit_squares) ASSERT_TRUE(check_square_certificate(K, c));
    ASSERT_TRUE(check_square_certificate(K, pr.q_nonsquare));
  }
}

TEST(Property, DeterministicAcrossThreadCounts)
{
  for (auto& fs : {"x", "x^2+1", "x^2+5", "x^2-x-1"}) {
    auto prof = compute_profile(parse_field(fs));
    auto ref = find_prime_pair(prof, 500, 1);
    for (unsigned t : {2u, 3u, 8u}) {
      auto pr = find_prime_pair(prof, 500, t);
      ASSERT_EQ(pr.p, ref.p) << fs;
      ASSERT_EQ(pr.q, ref.q) << fs;
    }
  }
}

TEST(Property, RationalPairsMatchLegendre)
{
  NumberField Q = parse_field("x");
  for (long N : {1L, 2L, 6L, 10L, 30L}) {
    auto prof = user_profile(Q, N, unit_generators(Q, N));
    auto pr = find_prime_pair(prof, 1000);
    long p = pr.p.c[0].get_num().get_si(), q = pr.q.c[0].get_num().get_si();
    EXPECT_EQ(p % 4, 1);
    EXPECT_EQ(legendre(q, p), -1);
    for (auto& u : prof.unit_generators) EXPECT_EQ(legendre(u.c[0].get_num().get_si(), p), 1);
    // no smaller odd prime qualifies
    for (long r = 3; r < p; r += 2) {
      if (!is_prime(Integer(r)) || N % r == 0) continue;
      bool all = true;
      for (auto& u : prof.unit_generators) all = all && legendre(u.c[0].get_num().get_si(), r) == 1;
      EXPECT_FALSE(all) << "p = " << r << " would qualify for N = " << N;
    }
  }
}

TEST(Parallel, FirstIsSchedulingIndependent)
{
  for (unsigned t : {1u, 2u, 5u, 16u}) {
    auto r = parallel_first<int>(1000, t, [](std::size_t i) -> std::optional<int> {
      if (i % 97 == 96) return static_cast<int>(i);
      return std::nullopt;
    });
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->first, 96u);
  }
  auto none = parallel_first<int>(50, 4, [](std::size_t) -> std::optional<int> { return std::nullopt; });
  EXPECT_FALSE(none.has_value());
}
