#include "ecosim/simulation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ecosim/errors.hpp"
#include "ecosim/metrics.hpp"

namespace ecosim {

namespace {

void validate(const SimConfig& c) {
  if (c.num_users < 1 || c.num_communities < 1 || c.num_users < c.num_communities)
    throw InvalidConfig("require num_users >= num_communities >= 1");
  if (c.initial_agents_per_user < 1 || c.deploy_every_requests < 1 || c.total_requests < 1)
    throw InvalidConfig("counts must be positive");
  if (c.initial_degree < 0 || c.initial_link_p <= 0.0 || c.initial_link_p > 1.0)
    throw InvalidConfig("bad initial topology parameters");
  if (c.evolution.crossover_fraction < 0.0 || c.evolution.crossover_fraction > 1.0 ||
      c.evolution.mutation_fraction < 0.0 || c.evolution.mutation_fraction > 1.0)
    throw InvalidConfig("operator fractions must lie in [0,1]");
  if (c.evolution.base_pop_size < 1 || c.evolution.max_generations < 1 ||
      c.evolution.stagnation_window < 1)
    throw InvalidConfig("bad evolution parameters");
}

CommunityTemplate make_community(int community_id, Rng& rng) {
  CommunityTemplate t;
  t.community_id = community_id;
  std::uniform_int_distribution<int> n_ids(6, 8);
  std::uniform_int_distribution<int> id_dist(kAttributeMin, kAttributeMax);
  std::uniform_int_distribution<int> center_dist(kAttributeMin, kAttributeMax);
  int n = n_ids(rng);
  std::set<int> ids;
  while (static_cast<int>(ids.size()) < n) ids.insert(id_dist(rng));
  for (int id : ids) t.attribute_profile.push_back({id, center_dist(rng)});
  std::uniform_int_distribution<int> groups_dist(2, 4);
  std::uniform_int_distribution<int> tuples_dist(3, 5);
  t.request_groups = groups_dist(rng);
  t.tuples_per_group = tuples_dist(rng);
  return t;
}

// A tuple drawn from a community template: one of its attribute ids with the
// center value plus uniform noise in [-10,10].
std::vector<AttributeTuple> draw_tuples(const CommunityTemplate& tpl, int count, bool zero_noise,
                                        Rng& rng) {
  count = std::min<int>(count, static_cast<int>(tpl.attribute_profile.size()));
  std::vector<std::size_t> idx(tpl.attribute_profile.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, idx.size() - 1);
    std::swap(idx[i], idx[d(rng)]);
  }
  std::uniform_int_distribution<int> noise(-10, 10);
  std::vector<AttributeTuple> tuples;
  for (int i = 0; i < count; ++i) {
    auto [id, center] = tpl.attribute_profile[idx[i]];
    int value = zero_noise ? center : std::clamp(center + noise(rng), kAttributeMin, kAttributeMax);
    tuples.push_back({id, value});
  }
  std::sort(tuples.begin(), tuples.end(), [](const AttributeTuple& a, const AttributeTuple& b) {
    return a.attribute_id < b.attribute_id;
  });
  return tuples;
}

}  // namespace

Agent generate_agent(World& world, UserModel& user) {
  Rng& rng = world.rng;
  const CommunityTemplate& tpl = world.communities[user.community_id];
  std::uniform_int_distribution<int> size_dist(3, 6);
  auto tuples = draw_tuples(tpl, size_dist(rng), world.zero_noise, rng);

  // Occasional cross-community diversity: one id swapped for a random one.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (!world.zero_noise && u(rng) < 0.20) {
    std::uniform_int_distribution<std::size_t> pos_dist(0, tuples.size() - 1);
    std::uniform_int_distribution<int> id_dist(kAttributeMin, kAttributeMax);
    std::uniform_int_distribution<int> value_dist(kAttributeMin, kAttributeMax);
    std::size_t pos = pos_dist(rng);
    int new_id = id_dist(rng);
    bool collision = std::any_of(tuples.begin(), tuples.end(), [&](const AttributeTuple& t) {
      return t.attribute_id == new_id;
    });
    if (!collision) {
      tuples[pos] = {new_id, value_dist(rng)};
      std::sort(tuples.begin(), tuples.end(), [](const AttributeTuple& a, const AttributeTuple& b) {
        return a.attribute_id < b.attribute_id;
      });
    }
  }

  Agent agent;
  agent.agent_id = world.net.allocate_agent_id();
  agent.service_ref = "service://user" + std::to_string(user.user_id) + "/" +
                      std::to_string(user.agents_deployed + 1);
  agent.description = SemanticDescription{std::move(tuples)};
  agent.origin_habitat = user.habitat_id;
  return agent;
}

UserRequest generate_request(World& world, const UserModel& user) {
  Rng& rng = world.rng;
  const CommunityTemplate& own = world.communities[user.community_id];
  UserRequest request;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> community_dist(0, static_cast<int>(world.communities.size()) - 1);
  for (int g = 0; g < own.request_groups; ++g) {
    // Business applications span sectors: some groups come from another
    // community's template, satisfiable only once foreign Agents migrate in.
    const CommunityTemplate* tpl = &own;
    if (!world.zero_noise && world.communities.size() > 1 && u(rng) < 0.45) {
      int other = community_dist(rng);
      if (other != user.community_id) tpl = &world.communities[other];
    }
    request.groups.push_back(draw_tuples(*tpl, own.tuples_per_group, world.zero_noise, rng));
  }
  return request;
}

World init(const SimConfig& config) {
  validate(config);
  World world{config, Network(config.feedback), {}, {}, Rng(config.rng_seed)};

  for (int c = 0; c < config.num_communities; ++c)
    world.communities.push_back(make_community(c, world.rng));

  for (int u = 0; u < config.num_users; ++u) {
    UserModel user;
    user.user_id = u + 1;
    user.habitat_id = static_cast<HabitatId>(u + 1);
    user.community_id = u % config.num_communities;  // round-robin
    world.net.create_habitat(user.habitat_id);
    world.users.push_back(user);
  }

  // Random start topology: stub pairing (configuration model) so each habitat
  // ends up linked to roughly initial_degree others in total. Self-pairs and
  // duplicate pairs are dropped, shaving the odd habitat slightly below target.
  int degree = std::min(config.initial_degree, config.num_users - 1);
  std::vector<HabitatId> stubs;
  for (const UserModel& user : world.users)
    for (int i = 0; i < degree; ++i) stubs.push_back(user.habitat_id);
  std::shuffle(stubs.begin(), stubs.end(), world.rng);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    HabitatId a = stubs[i];
    HabitatId b = stubs[i + 1];
    if (a == b || world.net.has_link(a, b)) continue;
    world.net.connect(a, b, config.initial_link_p, config.initial_link_p);
  }

  for (UserModel& user : world.users) {
    for (int i = 0; i < config.initial_agents_per_user; ++i) {
      Agent agent = generate_agent(world, user);
      user.agents_deployed += 1;
      world.net.deploy(std::move(agent), user.habitat_id, world.rng);
    }
  }
  return world;
}

EventRecord step(World& world) {
  std::uniform_int_distribution<std::size_t> user_dist(0, world.users.size() - 1);
  UserModel& user = world.users[user_dist(world.rng)];

  EventRecord record;
  record.request_index = ++world.steps_done;
  record.user_id = user.user_id;
  record.habitat_id = user.habitat_id;
  record.request = generate_request(world, user);

  PoolSnapshot snapshot = world.net.snapshot_pool(user.habitat_id);
  if (snapshot.agents.empty()) {
    record.best_fitness = 0.0;
    record.effectiveness = 0.0;
  } else {
    EvolveResult result = evolve(snapshot, record.request, world.config.evolution, world.rng);
    record.best_fitness = result.best_raw_fitness;
    record.effectiveness = effectiveness(result.best, record.request);
    record.generations_run = result.generations_run;
    if (!result.mean_length_per_generation.empty()) {
      double sum = std::accumulate(result.mean_length_per_generation.begin(),
                                   result.mean_length_per_generation.end(), 0.0);
      record.mean_sequence_length =
          sum / static_cast<double>(result.mean_length_per_generation.size());
    }
    // The user always uses the response.
    world.net.register_solution(user.habitat_id, result.best, world.rng);
    world.net.migration_feedback(result.best, user.habitat_id);
    std::set<AgentId> used;
    for (const auto& m : result.best.members) used.insert(m.agent_id);
    world.net.request_tick(user.habitat_id, used, world.rng);
  }

  user.requests_submitted += 1;
  if (user.requests_submitted % world.config.deploy_every_requests == 0) {
    Agent agent = generate_agent(world, user);
    user.agents_deployed += 1;
    world.net.deploy(std::move(agent), user.habitat_id, world.rng);
  }

  record.pool_size_after = static_cast<int>(world.net.habitat(user.habitat_id).pool_agents.size());
  return record;
}

std::pair<EventLog, World> run(const SimConfig& config) {
  World world = init(config);
  EventLog log;
  log.reserve(config.total_requests);
  for (int i = 0; i < config.total_requests; ++i) log.push_back(step(world));
  return {std::move(log), std::move(world)};
}

}  // namespace ecosim
