#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ecosim/errors.hpp"
#include "ecosim/metrics.hpp"

using namespace ecosim;

namespace {

Agent make_agent(AgentId id, std::vector<AttributeTuple> tuples) {
  Agent a;
  a.agent_id = id;
  a.description = make_description(std::move(tuples));
  return a;
}

}  // namespace

TEST_CASE("effectiveness") {
  SUBCASE("exact cover scores 100") {
    UserRequest r{{{{1, 10}, {2, 20}, {3, 30}}}};
    AgentSequence s{{make_agent(1, {{1, 10}, {2, 20}, {3, 30}})}, {}};
    CHECK(effectiveness(s, r) == doctest::Approx(100.0));
    CHECK(raw_fitness(s, r) == doctest::Approx(1.0));
  }
  SUBCASE("distance 50 on a single tuple scores 50") {
    UserRequest r{{{{1, 10}}}};
    AgentSequence s{{make_agent(1, {{1, 60}})}, {}};
    CHECK(effectiveness(s, r) == doctest::Approx(50.0));
  }
  SUBCASE("no matching id scores 0") {
    UserRequest r{{{{1, 10}}}};
    AgentSequence s{{make_agent(1, {{2, 10}})}, {}};
    CHECK(effectiveness(s, r) == doctest::Approx(0.0));
  }
  SUBCASE("100 iff raw fitness 1.0") {
    UserRequest r{{{{1, 10}, {2, 20}, {3, 30}}}};
    AgentSequence near{{make_agent(1, {{1, 11}, {2, 20}, {3, 30}})}, {}};
    CHECK(effectiveness(near, r) < 100.0);
    CHECK(raw_fitness(near, r) < 1.0);
  }
}

TEST_CASE("succession_series") {
  auto log_with = [](std::vector<double> effs) {
    EventLog log;
    for (std::size_t i = 0; i < effs.size(); ++i) {
      EventRecord e;
      e.request_index = static_cast<int>(i + 1);
      e.effectiveness = effs[i];
      log.push_back(e);
    }
    return log;
  };

  SUBCASE("constant log is flat") {
    auto s = succession_series(log_with(std::vector<double>(20, 60.0)), 5);
    for (const auto& [x, y] : s.moving_average.points) CHECK(y == doctest::Approx(60.0));
  }
  SUBCASE("window 1 equals raw") {
    auto s = succession_series(log_with({10, 20, 30, 40}), 1);
    for (std::size_t i = 0; i < s.raw.points.size(); ++i)
      CHECK(s.moving_average.points[i].second == doctest::Approx(s.raw.points[i].second));
  }
  SUBCASE("strictly increasing log keeps an increasing average") {
    std::vector<double> effs;
    for (int i = 0; i < 50; ++i) effs.push_back(i * 1.5);
    auto s = succession_series(log_with(effs), 10);
    for (std::size_t i = 1; i < s.moving_average.points.size(); ++i)
      CHECK(s.moving_average.points[i].second > s.moving_average.points[i - 1].second);
  }
}

TEST_CASE("partition_species") {
  SUBCASE("identical descriptions form one species") {
    std::vector<Agent> agents;
    for (int i = 0; i < 5; ++i) agents.push_back(make_agent(i + 1, {{1, 10}, {2, 20}, {3, 30}}));
    auto p = partition_species(agents);
    REQUIRE(p.species.size() == 1);
    CHECK(p.species[0].size() == 5);
  }
  SUBCASE("distant agents split") {
    std::vector<Agent> agents{make_agent(1, {{1, 10}, {2, 20}, {3, 30}}),
                              make_agent(2, {{4, 10}, {5, 20}, {6, 30}})};
    auto p = partition_species(agents);
    CHECK(p.species.size() == 2);
  }
  SUBCASE("members within the leader threshold join") {
    std::vector<Agent> agents{
        make_agent(1, {{1, 10}, {2, 20}, {3, 30}}),
        make_agent(2, {{1, 15}, {2, 20}, {3, 30}}),   // distance 0.05/3 buckets... well within
        make_agent(3, {{1, 10}, {2, 29}, {3, 30}}),
    };
    auto p = partition_species(agents);
    CHECK(p.species.size() == 1);
  }
  SUBCASE("partition covers all agents disjointly and respects the threshold") {
    Rng rng(13);
    std::uniform_int_distribution<int> id_dist(1, 10);
    std::uniform_int_distribution<int> value_dist(1, 100);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Agent> agents;
      std::uniform_int_distribution<int> n_dist(1, 40);
      int n = n_dist(rng);
      for (int i = 0; i < n; ++i) {
        std::set<int> ids;
        while (static_cast<int>(ids.size()) < 3) ids.insert(id_dist(rng));
        std::vector<AttributeTuple> tuples;
        for (int id : ids) tuples.push_back({id, value_dist(rng)});
        agents.push_back(make_agent(i + 1, std::move(tuples)));
      }
      auto p = partition_species(agents);
      std::size_t covered = 0;
      std::set<AgentId> seen;
      for (std::size_t s = 0; s < p.species.size(); ++s) {
        for (AgentId id : p.species[s]) {
          CHECK(seen.insert(id).second);
          ++covered;
          const Agent& a = *std::find_if(agents.begin(), agents.end(),
                                         [&](const Agent& x) { return x.agent_id == id; });
          CHECK(description_distance(a.description, p.representative[s]) <= kSpeciesThreshold);
        }
      }
      CHECK(covered == agents.size());
    }
  }
}

TEST_CASE("relative_abundance") {
  SUBCASE("four singleton species land in the first octave") {
    std::vector<Agent> agents;
    for (int i = 0; i < 4; ++i)
      agents.push_back(make_agent(i + 1, {{i * 3 + 1, 10}, {i * 3 + 2, 50}, {i * 3 + 3, 90}}));
    auto bins = relative_abundance(partition_species(agents));
    REQUIRE(bins.size() == 1);
    CHECK(bins[0].lo == 1);
    CHECK(bins[0].hi == 1);
    CHECK(bins[0].species_count == 4);
  }
  SUBCASE("bins sum to the species count") {
    Rng rng(17);
    std::uniform_int_distribution<int> id_dist(1, 12);
    std::uniform_int_distribution<int> value_dist(1, 100);
    std::vector<Agent> agents;
    for (int i = 0; i < 60; ++i) {
      std::set<int> ids;
      while (static_cast<int>(ids.size()) < 3) ids.insert(id_dist(rng));
      std::vector<AttributeTuple> tuples;
      for (int id : ids) tuples.push_back({id, value_dist(rng)});
      agents.push_back(make_agent(i + 1, std::move(tuples)));
    }
    auto p = partition_species(agents);
    auto bins = relative_abundance(p);
    int total = 0;
    for (const auto& b : bins) total += b.species_count;
    CHECK(total == static_cast<int>(p.species.size()));
  }
}

TEST_CASE("species_area") {
  SimConfig c;
  c.num_users = 12;
  c.num_communities = 3;
  c.total_requests = 10;
  c.evolution.max_generations = 10;
  auto [log, world] = run(c);

  SUBCASE("series is log-log and increasing in x") {
    Rng rng(1);
    auto s = species_area(world, 3, rng);
    for (std::size_t i = 1; i < s.points.size(); ++i)
      CHECK(s.points[i].first > s.points[i - 1].first);
  }
  SUBCASE("full sample counts the whole ecosystem") {
    Rng rng(1);
    auto s = species_area(world, 3, rng);
    REQUIRE(!s.points.empty());
    std::vector<Agent> all;
    for (const auto& [id, h] : world.net.habitats())
      for (const auto& [aid, agent] : h.pool_agents) all.push_back(agent);
    double expected = std::log10(static_cast<double>(partition_species(all).species.size()));
    CHECK(s.points.back().second == doctest::Approx(expected));
  }
  SUBCASE("species counts are monotone under nested habitat unions") {
    std::vector<HabitatId> ids;
    for (const auto& [id, h] : world.net.habitats()) ids.push_back(id);
    std::vector<Agent> pooled;
    std::size_t last = 0;
    for (HabitatId id : ids) {
      for (const auto& [aid, agent] : world.net.habitat(id).pool_agents) pooled.push_back(agent);
      std::size_t count = partition_species(pooled).species.size();
      CHECK(count >= last);
      last = count;
    }
  }
}

TEST_CASE("fit_power_law") {
  SUBCASE("exact line recovered") {
    MetricSeries s;
    for (int i = 0; i < 10; ++i) s.points.push_back({i * 0.5, 0.3 * (i * 0.5) + 1.0});
    auto fit = fit_power_law(s);
    CHECK(fit.slope == doctest::Approx(0.3));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
  }
  SUBCASE("constant y degenerates to slope 0 with r2 defined as 1") {
    MetricSeries s;
    for (int i = 0; i < 5; ++i) s.points.push_back({static_cast<double>(i), 2.0});
    auto fit = fit_power_law(s);
    CHECK(fit.slope == doctest::Approx(0.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
  }
  SUBCASE("random scatter matches an independent OLS computation") {
    Rng rng(23);
    std::uniform_real_distribution<double> noise(-0.5, 0.5);
    MetricSeries s;
    std::vector<double> xs, ys;
    for (int i = 0; i < 40; ++i) {
      double x = i * 0.1;
      double y = 1.7 * x - 0.4 + noise(rng);
      s.points.push_back({x, y});
      xs.push_back(x);
      ys.push_back(y);
    }
    // Oracle: textbook centered-moments OLS.
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double r2 = (sxy * sxy) / (sxx * syy);
    auto fit = fit_power_law(s);
    CHECK(fit.slope == doctest::Approx(slope));
    CHECK(fit.intercept == doctest::Approx(my - slope * mx));
    CHECK(fit.r_squared == doctest::Approx(r2));
  }
  SUBCASE("degenerate inputs rejected") {
    MetricSeries s;
    s.points = {{0, 1}, {1, 2}};
    CHECK_THROWS_AS(fit_power_law(s), DegenerateInput);
    MetricSeries flat;
    flat.points = {{1, 1}, {1, 2}, {1, 3}};
    CHECK_THROWS_AS(fit_power_law(flat), DegenerateInput);
  }
}
