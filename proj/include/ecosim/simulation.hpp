#pragma once

#include <cstdint>
#include <vector>

#include "ecosim/evolution.hpp"
#include "ecosim/habitat.hpp"
#include "ecosim/semantics.hpp"

namespace ecosim {

struct SimConfig {
  int num_users = 100;
  int initial_agents_per_user = 5;
  int deploy_every_requests = 3;
  int total_requests = 1000;
  int num_communities = 8;
  int initial_degree = 4;
  double initial_link_p = 0.07;
  std::uint64_t rng_seed = 42;
  EvolutionParams evolution;
  FeedbackParams feedback;
};

struct CommunityTemplate {
  int community_id = 0;
  // attribute_id -> center value, 6-8 entries.
  std::vector<std::pair<int, int>> attribute_profile;
  int request_groups = 2;
  int tuples_per_group = 3;
};

struct UserModel {
  int user_id = 0;
  HabitatId habitat_id = 0;
  int community_id = 0;
  int requests_submitted = 0;
  int agents_deployed = 0;
};

struct EventRecord {
  int request_index = 0;
  int user_id = 0;
  HabitatId habitat_id = 0;
  UserRequest request;
  double best_fitness = 0.0;
  double effectiveness = 0.0;  // percent
  int generations_run = 0;
  int pool_size_after = 0;
  double mean_sequence_length = 0.0;  // averaged over the evolve call's generations
};

struct World {
  SimConfig config;
  Network net;
  std::vector<UserModel> users;
  std::vector<CommunityTemplate> communities;
  Rng rng;
  int steps_done = 0;
  bool zero_noise = false;  // test hook: no value noise, no attribute swaps
};

World init(const SimConfig& config);

Agent generate_agent(World& world, UserModel& user);
UserRequest generate_request(World& world, const UserModel& user);

EventRecord step(World& world);

using EventLog = std::vector<EventRecord>;

std::pair<EventLog, World> run(const SimConfig& config);

}  // namespace ecosim
