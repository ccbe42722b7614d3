#include <gtest/gtest.h>

#include "support.hpp"

using namespace stacky;
using namespace stacky::test;

namespace {

CounterexampleReport report_for(const std::string& field, long bound = 200)
{
  NumberField K = parse_field(field);
  auto prof = compute_profile(K);
  auto pr = find_prime_pair(prof, bound);
  return build_counterexample_report(make_model(K, pr.p, pr.q), prof.N, prof.unit_generators, prof.provenance);
}

std::string rational_report()
{
  NumberField Q = parse_field("x");
  return serialize_report(
      build_counterexample_report(make_model(Q, Q.from_int(5), Q.from_int(3)), 1, {Q.from_int(-1)}));
}

std::string edit(const std::string& bytes, const std::function<void(Json&)>& f)
{
  Json j = Json::parse(bytes);
  f(j);
  return j.dump(2) + "\n";
}

}  // namespace

TEST(Serialize, StableAndRoundTrips)
{
  std::string a = rational_report(), b = rational_report();
  EXPECT_EQ(a, b);
  auto r = deserialize_report(a);
  EXPECT_EQ(serialize_report(r), a);
  Json j = Json::parse(a);
  EXPECT_EQ(j["genus"], (Json{{"num", "1"}, {"den", "2"}}));
  EXPECT_EQ(j["version"], "1");
  EXPECT_EQ(j["pair"]["p"], (Json{"5"}));
  EXPECT_EQ(j["global_emptiness"]["hilbert_symbol"], "-1");
}

TEST(Serialize, KeysAreSortedAndIntegersAreStrings)
{
  std::string bytes = rational_report();
  std::function<void(const Json&)> walk = [&](const Json& j) {
    ASSERT_FALSE(j.is_number());
    if (j.is_object()) {
      std::string prev;
      for (auto& [k, v] : j.items()) {
        ASSERT_LT(prev, k);
        prev = k;
        walk(v);
      }
    } else if (j.is_array()) {
      for (auto& v : j) walk(v);
    }
  };
  walk(Json::parse(bytes));
  // key order is visible in the bytes themselves
  EXPECT_LT(bytes.find("\"field\""), bytes.find("\"genus\""));
  EXPECT_LT(bytes.find("\"genus\""), bytes.find("\"version\""));
}

TEST(Serialize, RoundTripsOverSeveralFields)
{
  for (auto& fs : {"x", "x^2+1", "x^2-x-1", "x^2+5", "x^2+x+6"}) {
    // over x^2+x+6 the first pair has N(p) = 3433
    auto r = report_for(fs, std::string(fs) == "x^2+x+6" ? 5000 : 200);
    std::string bytes = serialize_report(r);
    ASSERT_EQ(deserialize_report(bytes), r) << fs;
    auto v = validate_report(bytes);
    ASSERT_TRUE(v.accepted) << fs << ": " << v.reason;
  }
}

TEST(Validate, AcceptsRationalReport)
{
  auto v = validate_report(rational_report());
  EXPECT_TRUE(v.accepted) << v.reason;
}

TEST(Validate, GenusTamper)
{
  auto v = validate_report(edit(rational_report(), [](Json& j) { j["genus"]["den"] = "3"; }));
  EXPECT_FALSE(v.accepted);
  EXPECT_NE(v.reason.find("genus mismatch"), std::string::npos) << v.reason;
}

TEST(Validate, ReplacingQByElevenFailsTheNonsquareCondition)
{
  auto v = validate_report(edit(rational_report(), [](Json& j) { j["pair"]["q"] = Json{"11"}; }));
  EXPECT_FALSE(v.accepted);
  EXPECT_NE(v.reason.find("nonsquare condition fails"), std::string::npos) << v.reason;
}

TEST(Validate, MalformedInput)
{
  try {
    validate_report("{not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedInput);
  }
  EXPECT_FALSE(validate_report("[]").accepted);
  EXPECT_FALSE(validate_report("{}").accepted);
  EXPECT_FALSE(validate_report("\"1\"").accepted);
}

TEST(Validate, TargetedTampers)
{
  std::string good = rational_report();
  std::vector<std::pair<std::string, std::function<void(Json&)>>> cases = {
      {"field", [](Json& j) { j["field"]["min_poly"] = Json{"1", "1"}; }},
      {"field degree", [](Json& j) { j["field"]["min_poly"] = Json{"0", "1", "0"}; }},
      {"provenance", [](Json& j) { j["profile"]["provenance"] = "user_supplied"; }},
      {"N", [](Json& j) { j["profile"]["N"] = "2"; }},
      {"unit", [](Json& j) { j["profile"]["unit_generators"][0] = Json{"1"}; }},
      {"p", [](Json& j) { j["pair"]["p"] = Json{"13"}; }},
      {"place", [](Json& j) { j["pair"]["place_of_p"]["prime"] = "13"; }},
      {"symbol", [](Json& j) { j["global_emptiness"]["hilbert_symbol"] = "1"; }},
      {"witness root", [](Json& j) { j["global_emptiness"]["unit_squares"][0]["witness"]["root"] = Json{"3"}; }},
      {"witness residue", [](Json& j) { j["global_emptiness"]["q_nonsquare"]["witness"]["residue"] = Json{"2"}; }},
      {"local point", [](Json& j) { j["local_points"]["entries"][0]["point"]["z"] = Json{"-1"}; }},
      {"local twist", [](Json& j) { j["local_points"]["entries"][1]["twist"] = "q"; }},
      {"local entry dropped", [](Json& j) { j["local_points"]["entries"].erase(3); }},
      {"generic rule", [](Json& j) { j["local_points"]["generic_rule"] = "hasse"; }},
      {"version", [](Json& j) { j["version"] = "2"; }},
      {"real place", [](Json& j) { j["local_points"]["entries"][3]["place"]["hi"]["num"] = "1"; }},
      {"number instead of string", [](Json& j) { j["profile"]["N"] = 1; }},
  };
  for (auto& [name, f] : cases) {
    auto v = validate_report(edit(good, f));
    EXPECT_FALSE(v.accepted) << name;
  }
}

TEST(Property, RandomMutationsAreRejected)
{
  for (auto& fs : {"x", "x^2+1"}) {
    std::string good = serialize_report(report_for(fs));
    Rng rng(41);
    for (int i = 0; i < 150; ++i) {
      std::string what;
      std::string bad = mutate_json(good, rng, &what);
      if (bad == good) continue;
      auto v = validate_report(bad);
      ASSERT_FALSE(v.accepted) << fs << ": " << what;
    }
  }
}

TEST(SquareCertificates, JsonRoundTrip)
{
  NumberField K = parse_field("x^2-x-1");
  std::vector<Place> places;
  for (u64 ell : {2u, 3u, 5u, 11u})
    for (auto& P : K.places_above(ell)) places.emplace_back(P);
  for (auto& R : K.real_places()) places.emplace_back(R);
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    auto c = is_square_at(K, rng.nonzero(K, 30), rng.pick(places));
    Json j = Json::parse(detail::square_json(c).dump());
    ASSERT_EQ(detail::read_square(K, j), c);
  }
}
