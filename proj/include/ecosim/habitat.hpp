#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ecosim/evolution.hpp"
#include "ecosim/semantics.hpp"

namespace ecosim {

struct FeedbackParams {
  double eta_up = 0.2;
  double eta_down = 0.1;
  double epsilon_close = 0.02;
  double new_link_p0 = 0.1;
  double cluster_threshold = 0.1;
  int idle_limit = 5;
};

struct Link {
  double p = 0.0;
  // Set when this link delivers a copy, cleared when a delivery earns positive
  // feedback; a still-set flag at the next request tick triggers decay.
  bool delivered_unused = false;
};

struct Habitat {
  HabitatId habitat_id = 0;
  std::map<AgentId, Agent> pool_agents;
  std::vector<AgentSequence> pool_sequences;
  std::map<HabitatId, Link> outgoing;
};

// The simulated Habitat overlay: per-user nodes with Agent-pools and
// probabilistic directed migration links, reconfigured by usage feedback.
class Network {
 public:
  explicit Network(FeedbackParams feedback = {}) : feedback_(feedback) {}

  const FeedbackParams& feedback() const { return feedback_; }

  HabitatId create_habitat(HabitatId id);
  bool has_habitat(HabitatId id) const { return habitats_.count(id) != 0; }
  const Habitat& habitat(HabitatId id) const;
  const std::map<HabitatId, Habitat>& habitats() const { return habitats_; }

  AgentId allocate_agent_id() { return next_agent_id_++; }

  void connect(HabitatId h1, HabitatId h2, double p12, double p21);
  bool has_link(HabitatId from, HabitatId to) const;
  double link_probability(HabitatId from, HabitatId to) const;

  // Adds the agent to its home pool and performs the first migration wave.
  void deploy(Agent agent, HabitatId home, Rng& rng);

  // Copies the agent probabilistically along every outgoing link of `from`;
  // the original stays. Returns ids of habitats that received a copy.
  std::vector<HabitatId> migrate_copy(const Agent& agent, HabitatId from, Rng& rng);

  // Stores the sequence (deduplicated by member id list) and copies it
  // probabilistically to connected Habitats.
  void register_solution(HabitatId habitat_id, const AgentSequence& seq, Rng& rng);

  // Hebbian strengthening of the links the used sequence arrived over, plus
  // new-link creation for multi-hop arrivals and usage bookkeeping.
  void migration_feedback(const AgentSequence& used, HabitatId user_habitat);

  // Idle accounting, escape migration / deletion, and decay of links whose
  // deliveries went unused. Call once per request served at this habitat.
  void request_tick(HabitatId habitat_id, const std::set<AgentId>& used_agent_ids, Rng& rng);

  int escape_budget(HabitatId habitat_id) const;
  std::set<HabitatId> cluster_of(HabitatId habitat_id) const;

  // New habitat joined to k random existing ones, pool merged from theirs.
  HabitatId add_habitat(HabitatId new_id, int k, Rng& rng);

  PoolSnapshot snapshot_pool(HabitatId habitat_id) const;

  std::size_t total_agents() const;

 private:
  Habitat& habitat_mut(HabitatId id);
  Agent make_copy(const Agent& original, HabitatId target);

  std::map<HabitatId, Habitat> habitats_;
  FeedbackParams feedback_;
  AgentId next_agent_id_ = 1;
};

}  // namespace ecosim
