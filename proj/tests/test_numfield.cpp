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

const std::vector<std::string> kFields = {"x", "x^2+1", "x^2-x-1", "x^2+5", "x^2+x+6", "x^3-2", "x^3-x-1"};

}  // namespace

TEST(ParseField, AcceptsMonicIrreducible)
{
  EXPECT_EQ(parse_field("x^2+1").degree(), 2);
  EXPECT_EQ(parse_field("x").degree(), 1);
  EXPECT_EQ(parse_field(" x^3 - 2 ").degree(), 3);
}

TEST(ParseField, Errors)
{
  EXPECT_EQ(code_of([] { parse_field("x^2-1"); }), Errc::Reducible);
  EXPECT_EQ(code_of([] { parse_field("x^4+4"); }), Errc::Reducible);
  EXPECT_EQ(code_of([] { parse_field("x^4-x^2+... "); }), Errc::ParseError);
  EXPECT_EQ(code_of([] { parse_field("2*x^2+1"); }), Errc::NotMonic);
  EXPECT_EQ(code_of([] { parse_field("x^2+1/2"); }), Errc::ParseError);
  EXPECT_EQ(code_of([] { parse_field("7"); }), Errc::ParseError);
  EXPECT_EQ(code_of([] { parse_field("x^2+y"); }), Errc::ParseError);
}

TEST(Arithmetic, GaussianExamples)
{
  NumberField K = parse_field("x^2+1");
  EXPECT_EQ(K.mul(el(K, "1+t"), el(K, "1-t")), K.from_int(2));
  EXPECT_EQ(K.inv(K.theta()), el(K, "-t"));
  EXPECT_EQ(code_of([&] { K.inv(K.zero()); }), Errc::DivisionByZero);
}

TEST(Arithmetic, GoldenRatioReduction)
{
  NumberField K = parse_field("x^2-x-1");
  EXPECT_EQ(K.mul(K.theta(), K.theta()), el(K, "t+1"));
}

TEST(Norm, Examples)
{
  NumberField Qi = parse_field("x^2+1"), G = parse_field("x^2-x-1");
  EXPECT_EQ(Qi.norm(el(Qi, "4+t")), 17);
  EXPECT_EQ(Qi.norm(Qi.from_int(3)), 9);
  EXPECT_EQ(G.norm(G.from_int(3)), 9);
  EXPECT_EQ(G.norm(G.theta()), -1);
}

TEST(FactorMod, GaussianExamples)
{
  NumberField K = parse_field("x^2+1");
  EXPECT_EQ(K.factor_mod(5), (std::vector<FpFactor>{{{2, 1}, 1}, {{3, 1}, 1}}));
  EXPECT_EQ(K.factor_mod(3), (std::vector<FpFactor>{{{1, 0, 1}, 1}}));
  EXPECT_EQ(K.factor_mod(2), (std::vector<FpFactor>{{{1, 1}, 2}}));
  EXPECT_EQ(code_of([&] { K.factor_mod(9); }), Errc::NotPrime);
}

TEST(PlacesAbove, GaussianExamples)
{
  NumberField K = parse_field("x^2+1");
  auto p5 = K.places_above(5), p3 = K.places_above(3), p2 = K.places_above(2);
  ASSERT_EQ(p5.size(), 2u);
  for (auto& P : p5) EXPECT_TRUE(P.e == 1 && P.d == 1);
  ASSERT_EQ(p3.size(), 1u);
  EXPECT_TRUE(p3[0].e == 1 && p3[0].d == 2);
  ASSERT_EQ(p2.size(), 1u);
  EXPECT_TRUE(p2[0].e == 2 && p2[0].d == 1);
}

TEST(PlacesAbove, NonMaximalOrderIsRejected)
{
  NumberField K = parse_field("x^2+3");
  EXPECT_FALSE(K.order_maximal_at(2));
  EXPECT_EQ(code_of([&] { K.places_above(2); }), Errc::OrderNotMaximalAtPrime);
  EXPECT_EQ(K.places_above(3).size(), 1u);
}

TEST(Support, Examples)
{
  NumberField Q = parse_field("x"), K = parse_field("x^2+1");
  auto s6 = Q.support(Q.from_int(6));
  ASSERT_EQ(s6.size(), 2u);
  EXPECT_EQ(s6[0].place.prime, 2u);
  EXPECT_EQ(s6[1].place.prime, 3u);
  auto s = K.support(el(K, "4+t"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].place.prime, 17u);
  EXPECT_EQ(s[0].place.local_factor, (FpPoly{4, 1}));
  auto s3 = K.support(K.from_int(3));
  ASSERT_EQ(s3.size(), 1u);
  EXPECT_EQ(s3[0].place.d, 2);
  EXPECT_EQ(code_of([&] { K.support(K.zero()); }), Errc::ZeroElement);
}

TEST(Parity, OddMeansNoPlaceAboveTwo)
{
  NumberField K = parse_field("x^2+1");
  EXPECT_TRUE(K.is_odd(K.from_int(3)));
  EXPECT_FALSE(K.is_odd(el(K, "1+t")));
  EXPECT_TRUE(K.is_odd(el(K, "4+t")));
}

TEST(PrimeElement, Examples)
{
  NumberField K = parse_field("x^2+1");
  EXPECT_FALSE(K.is_prime_element(K.from_int(5)).prime);
  auto three = K.is_prime_element(K.from_int(3));
  EXPECT_TRUE(three.prime);
  EXPECT_EQ(three.place->d, 2);
  auto g = K.is_prime_element(el(K, "4+t"));
  EXPECT_TRUE(g.prime);
  EXPECT_EQ(g.place->prime, 17u);
  EXPECT_EQ(code_of([&] { K.is_prime_element(K.theta()); }), Errc::UnitElement);
  EXPECT_EQ(code_of([&] { K.is_prime_element(K.zero()); }), Errc::ZeroElement);
}

TEST(RealPlaces, CountsAndIsolation)
{
  EXPECT_EQ(parse_field("x").real_place_count(), 1);
  EXPECT_EQ(parse_field("x^2+1").real_place_count(), 0);
  EXPECT_EQ(parse_field("x^2-x-1").real_place_count(), 2);
  EXPECT_EQ(parse_field("x^3-2").real_place_count(), 1);
  NumberField K = parse_field("x^2-x-1");
  for (auto& R : K.real_places()) {
    auto seq = sturm_sequence(K.qpoly());
    EXPECT_EQ(count_roots(seq, R.lo, R.hi), 1);
  }
}

TEST(Property, RingAxioms)
{
  Rng rng(1);
  for (auto& fs : kFields) {
    NumberField K = parse_field(fs);
    for (int i = 0; i < 1000; ++i) {
      Element a = rng.rational_element(K, 9), b = rng.rational_element(K, 9), c = rng.rational_element(K, 9);
      ASSERT_EQ(K.mul(K.mul(a, b), c), K.mul(a, K.mul(b, c))) << fs;
      ASSERT_EQ(K.mul(a, K.add(b, c)), K.add(K.mul(a, b), K.mul(a, c))) << fs;
      ASSERT_EQ(K.mul(a, b), K.mul(b, a)) << fs;
      if (!K.is_zero(a)) {
        ASSERT_EQ(K.mul(a, K.inv(a)), K.one()) << fs;
      }
    }
  }
}

TEST(Property, NormIsMultiplicative)
{
  Rng rng(2);
  for (auto& fs : kFields) {
    NumberField K = parse_field(fs);
    for (int i = 0; i < 1000; ++i) {
      Element a = rng.rational_element(K, 20), b = rng.rational_element(K, 20);
      ASSERT_EQ(K.norm(K.mul(a, b)), K.norm(a) * K.norm(b)) << fs;
    }
  }
}

TEST(Property, FactorizationRecombinesAndIsSquarefreeAwayFromDisc)
{
  for (auto& fs : kFields) {
    NumberField K = parse_field(fs);
    Integer disc = K.discriminant();
    for (u64 ell : primes_up_to(100)) {
      Fp F(ell);
      auto factors = K.factor_mod(ell);
      FpPoly prod{1};
      int deg = 0;
      for (auto& [g, mult] : factors) {
        for (int k = 0; k < mult; ++k) prod = F.mul(prod, g);
        deg += Fp::deg(g) * mult;
      }
      ASSERT_EQ(prod, F.reduce(K.poly())) << fs << " mod " << ell;
      ASSERT_EQ(deg, K.degree());
      if (!mpz_divisible_ui_p(disc.get_mpz_t(), ell)) {
        for (auto& f : factors) ASSERT_EQ(f.multiplicity, 1) << fs << " mod " << ell;
      }
    }
  }
}

TEST(Property, PlaceDataSumsToDegree)
{
  for (auto& fs : kFields) {
    NumberField K = parse_field(fs);
    for (u64 ell : primes_up_to(60)) {
      if (!K.order_maximal_at(ell)) continue;
      int total = 0;
      for (auto& P : K.places_above(ell)) total += P.e * P.d;
      ASSERT_EQ(total, K.degree()) << fs << " at " << ell;
    }
  }
}

TEST(Property, SupportOfProductAddsValuations)
{
  Rng rng(3);
  for (auto& fs : {"x", "x^2+1", "x^2-x-1", "x^2+5"}) {
    NumberField K = parse_field(fs);
    for (int i = 0; i < 200; ++i) {
      Element a = rng.nonzero(K, 30), b = rng.nonzero(K, 30);
      try {
        auto sab = K.support(K.mul(a, b));
        for (auto& [P, v] : sab) ASSERT_EQ(v, K.valuation(a, P) + K.valuation(b, P)) << fs;
        for (auto* x : {&a, &b})
          for (auto& [P, v] : K.support(*x))
            ASSERT_TRUE(std::any_of(sab.begin(), sab.end(), [&](auto& s) { return s.place == P; }));
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), Errc::OrderNotMaximalAtPrime);
      }
    }
  }
}

TEST(Format, RoundTripsElements)
{
  Rng rng(4);
  NumberField K = parse_field("x^3-2");
  for (int i = 0; i < 100; ++i) {
    Element a = rng.rational_element(K, 50);
    ASSERT_EQ(K.parse_element(K.format(a)), a);
  }
}
