#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ecosim/errors.hpp"
#include "ecosim/semantics.hpp"

using namespace ecosim;

namespace {

Agent agent_with(std::vector<AttributeTuple> tuples, AgentId id = 1) {
  Agent a;
  a.agent_id = id;
  a.description = make_description(std::move(tuples));
  return a;
}

AgentSequence seq_of(std::vector<std::vector<AttributeTuple>> descs) {
  AgentSequence s;
  AgentId id = 1;
  for (auto& d : descs) s.members.push_back(agent_with(std::move(d), id++));
  return s;
}

SemanticDescription random_description(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size_dist(3, 6);
  std::uniform_int_distribution<int> id_dist(1, 100);
  std::uniform_int_distribution<int> value_dist(1, 100);
  std::set<int> ids;
  int n = size_dist(rng);
  while (static_cast<int>(ids.size()) < n) ids.insert(id_dist(rng));
  std::vector<AttributeTuple> tuples;
  for (int id : ids) tuples.push_back({id, value_dist(rng)});
  return make_description(std::move(tuples));
}

}  // namespace

TEST_CASE("tuple_distance") {
  CHECK(tuple_distance({1, 25}, {1, 23}) == 2);
  CHECK(tuple_distance({3, 55}, {3, 55}) == 0);
  CHECK(tuple_distance({1, 25}, {2, 25}) == kMissingPenalty);

  SUBCASE("symmetric, zero on self") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(1, 100);
    for (int i = 0; i < 200; ++i) {
      AttributeTuple x{d(rng), d(rng)}, y{d(rng), d(rng)};
      CHECK(tuple_distance(x, y) == tuple_distance(y, x));
      CHECK(tuple_distance(x, x) == 0);
    }
  }
}

TEST_CASE("flatten") {
  UserRequest r{{{{1, 2}}, {{3, 4}}}};
  auto flat = flatten(r);
  REQUIRE(flat.size() == 2);
  CHECK(flat[0] == AttributeTuple{1, 2});
  CHECK(flat[1] == AttributeTuple{3, 4});

  UserRequest r2{{{{1, 2}, {2, 3}}}};
  auto flat2 = flatten(r2);
  REQUIRE(flat2.size() == 2);
  CHECK(flat2[0] == AttributeTuple{1, 2});

  UserRequest r3{{{{1, 1}, {2, 2}, {3, 3}}, {{4, 4}, {5, 5}, {6, 6}}}};
  CHECK(flatten(r3).size() == 6);
}

TEST_CASE("raw_fitness") {
  SUBCASE("exact cover gives 1.0") {
    UserRequest r{{{{1, 10}, {2, 20}, {3, 30}}}};
    auto s = seq_of({{{1, 10}, {2, 20}, {3, 30}}});
    CHECK(raw_fitness(s, r) == doctest::Approx(1.0));
  }
  SUBCASE("hand-evaluated single mismatch") {
    UserRequest r{{{{1, 23}}}};
    auto s = seq_of({{{1, 25}}});
    CHECK(raw_fitness(s, r) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("missing attribute id") {
    UserRequest r{{{{1, 50}}}};
    auto s = seq_of({{{2, 50}}});
    CHECK(raw_fitness(s, r) == doctest::Approx(1.0 / 101.0));
  }
  SUBCASE("invariant: in (0,1], permutation invariant, append never hurts") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      UserRequest r;
      std::uniform_int_distribution<int> groups_dist(2, 4);
      int g = groups_dist(rng);
      for (int i = 0; i < g; ++i) r.groups.push_back(random_description(rng).tuples);
      AgentSequence s;
      std::uniform_int_distribution<int> len_dist(1, 4);
      int len = len_dist(rng);
      for (int i = 0; i < len; ++i) {
        Agent a;
        a.agent_id = static_cast<AgentId>(i + 1);
        a.description = random_description(rng);
        s.members.push_back(a);
      }
      double f = raw_fitness(s, r);
      CHECK(f > 0.0);
      CHECK(f <= 1.0);

      AgentSequence shuffled = s;
      std::shuffle(shuffled.members.begin(), shuffled.members.end(), rng);
      UserRequest r_shuffled = r;
      std::shuffle(r_shuffled.groups.begin(), r_shuffled.groups.end(), rng);
      CHECK(raw_fitness(shuffled, r_shuffled) == doctest::Approx(f));

      AgentSequence extended = s;
      Agent extra;
      extra.agent_id = 999;
      extra.description = random_description(rng);
      extended.members.push_back(extra);
      CHECK(raw_fitness(extended, r) >= f);
    }
  }
}

TEST_CASE("description_distance") {
  auto d1 = make_description({{1, 10}, {2, 20}, {3, 30}});
  CHECK(description_distance(d1, d1) == doctest::Approx(0.0));

  // Size-3 minimum relaxed inside this metric's tests.
  SemanticDescription a{{{1, 10}}}, b{{{1, 20}}};
  CHECK(description_distance(a, b) == doctest::Approx(0.10));

  SemanticDescription c{{{1, 10}}}, d{{{2, 10}}};
  CHECK(description_distance(c, d) == doctest::Approx(1.0));

  SUBCASE("symmetric, bounded, zero iff equal") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
      auto x = random_description(rng);
      auto y = random_description(rng);
      double dxy = description_distance(x, y);
      CHECK(dxy == doctest::Approx(description_distance(y, x)));
      CHECK(dxy >= 0.0);
      CHECK(dxy <= 1.0);
      if (dxy == 0.0) CHECK(x == y);
    }
  }
}

TEST_CASE("semantic filter translation") {
  auto filter = SemanticFilter::load(ECOSIM_DATA_DIR "/travel_filter.txt");
  CHECK(filter.translate(AttributeTuple{1, 25}) == "(Business, Airline)");
  CHECK(filter.translate(AttributeTuple{5, 37}) == "(Depart, Edinburgh)");

  SUBCASE("graceful fallbacks") {
    CHECK(filter.translate(AttributeTuple{4, 61}) == "(Cost, 61)");
    CHECK(filter.translate(AttributeTuple{9, 9}) == "(attr9, 9)");
  }

  SUBCASE("full description matches the travel table") {
    auto desc = parse_description("{(1,25),(2,35),(3,55),(4,6),(5,37),(6,12)}");
    CHECK(filter.translate(desc) ==
          "{(Business, Airline), (Company, British Midland), (Quality, Economy), (Cost, 60), "
          "(Depart, Edinburgh), (Arrive, London)}");
  }
}

TEST_CASE("tuple text parsing") {
  auto desc = parse_description("{(1,25), (2,35), (3,55)}");
  REQUIRE(desc.tuples.size() == 3);
  CHECK(desc.tuples[0] == AttributeTuple{1, 25});

  auto req = parse_request("[{(1,23),(2,45),(3,33)}, {(1,84),(2,48),(3,53)}]");
  REQUIRE(req.groups.size() == 2);
  CHECK(req.groups[1][0] == AttributeTuple{1, 84});

  CHECK_THROWS_AS(parse_description("{(1,25),(1,30)}"), InvalidConfig);
  CHECK_THROWS_AS(parse_description("{(1,25"), InvalidConfig);
  CHECK_THROWS_AS(parse_request("{(1,2)}"), InvalidConfig);
}

TEST_CASE("canonical ordering and validation") {
  auto d = make_description({{5, 1}, {2, 2}, {9, 3}});
  CHECK(d.tuples[0].attribute_id == 2);
  CHECK(d.tuples[2].attribute_id == 9);
  CHECK_FALSE(valid_description(SemanticDescription{{{1, 1}, {2, 2}}}));  // too small
  CHECK(valid_description(make_description({{1, 1}, {2, 2}, {3, 3}})));
  CHECK_THROWS_AS(make_description({{0, 5}}), InvalidConfig);
  CHECK_THROWS_AS(make_description({{1, 101}}), InvalidConfig);
}
