#include "ecosim/habitat.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ecosim/errors.hpp"

namespace ecosim {

HabitatId Network::create_habitat(HabitatId id) {
  if (habitats_.count(id)) throw DuplicateHabitat("habitat already exists: " + std::to_string(id));
  Habitat h;
  h.habitat_id = id;
  habitats_.emplace(id, std::move(h));
  return id;
}

const Habitat& Network::habitat(HabitatId id) const {
  auto it = habitats_.find(id);
  if (it == habitats_.end()) throw UnknownHabitat("unknown habitat: " + std::to_string(id));
  return it->second;
}

Habitat& Network::habitat_mut(HabitatId id) {
  auto it = habitats_.find(id);
  if (it == habitats_.end()) throw UnknownHabitat("unknown habitat: " + std::to_string(id));
  return it->second;
}

void Network::connect(HabitatId h1, HabitatId h2, double p12, double p21) {
  if (h1 == h2) throw SelfLink("habitat cannot link to itself: " + std::to_string(h1));
  Habitat& a = habitat_mut(h1);
  Habitat& b = habitat_mut(h2);
  if (p12 <= 0.0 || p12 > 1.0 || p21 <= 0.0 || p21 > 1.0)
    throw InvalidConfig("link probability outside (0,1]");
  a.outgoing[h2].p = p12;
  b.outgoing[h1].p = p21;
}

bool Network::has_link(HabitatId from, HabitatId to) const {
  auto it = habitats_.find(from);
  return it != habitats_.end() && it->second.outgoing.count(to) != 0;
}

double Network::link_probability(HabitatId from, HabitatId to) const {
  const Habitat& h = habitat(from);
  auto it = h.outgoing.find(to);
  return it == h.outgoing.end() ? 0.0 : it->second.p;
}

Agent Network::make_copy(const Agent& original, HabitatId target) {
  Agent copy = original;
  copy.agent_id = allocate_agent_id();
  copy.migration_history.push_back(target);
  copy.idle_request_count = 0;
  copy.usage_count = 0;
  copy.escape_remaining = escape_budget(target);
  return copy;
}

void Network::deploy(Agent agent, HabitatId home, Rng& rng) {
  Habitat& h = habitat_mut(home);
  agent.origin_habitat = home;
  agent.migration_history = {home};
  agent.idle_request_count = 0;
  agent.escape_remaining = escape_budget(home);
  AgentId id = agent.agent_id;
  h.pool_agents[id] = std::move(agent);
  migrate_copy(h.pool_agents[id], home, rng);
}

std::vector<HabitatId> Network::migrate_copy(const Agent& agent, HabitatId from, Rng& rng) {
  Habitat& h = habitat_mut(from);
  if (!h.pool_agents.count(agent.agent_id))
    throw UnknownHabitat("agent " + std::to_string(agent.agent_id) + " not in pool of habitat " +
                         std::to_string(from));
  Agent original = h.pool_agents[agent.agent_id];
  std::vector<HabitatId> delivered;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& [target, link] : h.outgoing) {
    if (u(rng) < link.p) {
      Agent copy = make_copy(original, target);
      habitat_mut(target).pool_agents[copy.agent_id] = std::move(copy);
      link.delivered_unused = true;
      delivered.push_back(target);
    }
  }
  return delivered;
}

namespace {

std::vector<AgentId> member_ids(const AgentSequence& seq) {
  std::vector<AgentId> ids;
  ids.reserve(seq.members.size());
  for (const auto& m : seq.members) ids.push_back(m.agent_id);
  return ids;
}

bool store_sequence(Habitat& h, const AgentSequence& seq) {
  auto key = member_ids(seq);
  for (const auto& existing : h.pool_sequences)
    if (member_ids(existing) == key) return false;
  h.pool_sequences.push_back(seq);
  return true;
}

}  // namespace

void Network::register_solution(HabitatId habitat_id, const AgentSequence& seq, Rng& rng) {
  Habitat& h = habitat_mut(habitat_id);
  AgentSequence local = seq;
  if (std::find(local.provenance.begin(), local.provenance.end(), habitat_id) ==
      local.provenance.end())
    local.provenance.push_back(habitat_id);
  store_sequence(h, local);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& [target, link] : h.outgoing) {
    if (u(rng) < link.p) {
      store_sequence(habitat_mut(target), local);
      link.delivered_unused = true;
    }
  }
}

void Network::migration_feedback(const AgentSequence& used, HabitatId user_habitat) {
  Habitat& user = habitat_mut(user_habitat);

  std::set<HabitatId> origins;
  for (const auto& m : used.members) origins.insert(m.origin_habitat);
  for (HabitatId p : used.provenance) origins.insert(p);
  origins.erase(user_habitat);

  for (HabitatId o : origins) {
    if (!habitats_.count(o)) continue;  // origin may have left the network
    Habitat& from = habitat_mut(o);
    auto it = from.outgoing.find(user_habitat);
    if (it != from.outgoing.end()) {
      it->second.p += feedback_.eta_up * (1.0 - it->second.p);
      it->second.delivered_unused = false;
    } else {
      // Arrived over multiple hops: form the direct bi-directional pair.
      connect(o, user_habitat, feedback_.new_link_p0, feedback_.new_link_p0);
    }
  }

  for (const auto& m : used.members) {
    auto it = user.pool_agents.find(m.agent_id);
    if (it != user.pool_agents.end()) {
      it->second.usage_count += 1;
      it->second.idle_request_count = 0;
    }
  }
}

void Network::request_tick(HabitatId habitat_id, const std::set<AgentId>& used_agent_ids,
                           Rng& rng) {
  Habitat& h = habitat_mut(habitat_id);

  std::vector<AgentId> to_escape;
  for (auto& [id, agent] : h.pool_agents) {
    if (used_agent_ids.count(id)) {
      agent.idle_request_count = 0;
      continue;
    }
    agent.idle_request_count += 1;
    if (agent.idle_request_count >= feedback_.idle_limit) to_escape.push_back(id);
  }

  for (AgentId id : to_escape) {
    Agent agent = h.pool_agents.at(id);
    h.pool_agents.erase(id);
    if (agent.escape_remaining <= 0 || h.outgoing.empty()) continue;  // deleted
    std::vector<HabitatId> targets;
    targets.reserve(h.outgoing.size());
    for (const auto& [t, link] : h.outgoing) targets.push_back(t);
    std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
    HabitatId target = targets[pick(rng)];
    agent.idle_request_count = 0;
    agent.escape_remaining -= 1;
    agent.migration_history.push_back(target);
    habitat_mut(target).pool_agents[agent.agent_id] = std::move(agent);  // move, not copy
  }

  // Decay links whose deliveries since the last positive feedback went unused.
  std::vector<HabitatId> to_remove;
  for (auto& [target, link] : h.outgoing) {
    if (!link.delivered_unused) continue;
    link.p *= (1.0 - feedback_.eta_down);
    link.delivered_unused = false;
    if (link.p < feedback_.epsilon_close) to_remove.push_back(target);
  }
  for (HabitatId target : to_remove) {
    h.outgoing.erase(target);
    Habitat& other = habitat_mut(target);
    auto rev = other.outgoing.find(habitat_id);
    if (rev != other.outgoing.end() && rev->second.p < feedback_.epsilon_close)
      other.outgoing.erase(rev);
  }
}

int Network::escape_budget(HabitatId habitat_id) const {
  std::size_t cluster = cluster_of(habitat_id).size();
  int budget = static_cast<int>(std::ceil(std::log2(1.0 + static_cast<double>(cluster))));
  return std::max(2, budget);
}

std::set<HabitatId> Network::cluster_of(HabitatId habitat_id) const {
  if (!habitats_.count(habitat_id))
    throw UnknownHabitat("unknown habitat: " + std::to_string(habitat_id));
  // Undirected adjacency over edges with max(p_forward, p_backward) at or
  // above the clustering threshold. Built from both directions because decay
  // removal can leave a link stored one way only.
  std::map<HabitatId, std::set<HabitatId>> adj;
  for (const auto& [id, h] : habitats_) {
    for (const auto& [target, link] : h.outgoing) {
      double strength = std::max(link.p, link_probability(target, id));
      if (strength >= feedback_.cluster_threshold) {
        adj[id].insert(target);
        adj[target].insert(id);
      }
    }
  }
  std::set<HabitatId> seen{habitat_id};
  std::deque<HabitatId> frontier{habitat_id};
  while (!frontier.empty()) {
    HabitatId cur = frontier.front();
    frontier.pop_front();
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (HabitatId next : it->second) {
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return seen;
}

HabitatId Network::add_habitat(HabitatId new_id, int k, Rng& rng) {
  if (habitats_.count(new_id))
    throw DuplicateHabitat("habitat already exists: " + std::to_string(new_id));
  if (k > static_cast<int>(habitats_.size()))
    throw InsufficientPeers("requested " + std::to_string(k) + " peers, have " +
                            std::to_string(habitats_.size()));
  std::vector<HabitatId> existing;
  existing.reserve(habitats_.size());
  for (const auto& [id, h] : habitats_) existing.push_back(id);

  create_habitat(new_id);

  std::vector<HabitatId> peers;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, existing.size() - 1);
    std::swap(existing[i], existing[d(rng)]);
    peers.push_back(existing[i]);
  }
  for (HabitatId peer : peers) connect(new_id, peer, feedback_.new_link_p0, feedback_.new_link_p0);

  // Pool created by merging the pools of the initially connected habitats.
  Habitat& nh = habitat_mut(new_id);
  for (HabitatId peer : peers) {
    for (const auto& [id, agent] : habitat(peer).pool_agents) {
      Agent copy = make_copy(agent, new_id);
      nh.pool_agents[copy.agent_id] = std::move(copy);
    }
  }
  return new_id;
}

PoolSnapshot Network::snapshot_pool(HabitatId habitat_id) const {
  const Habitat& h = habitat(habitat_id);
  PoolSnapshot snap;
  std::set<AgentId> seen;
  for (const auto& [id, agent] : h.pool_agents) {
    snap.agents.push_back(agent);
    seen.insert(id);
  }
  snap.sequences = h.pool_sequences;
  // Stored sequences may reference agents no longer pooled here; keep their
  // members drawable so every individual stays inside the snapshot.
  for (const auto& seq : snap.sequences) {
    for (const auto& m : seq.members) {
      if (!seen.count(m.agent_id)) {
        snap.agents.push_back(m);
        seen.insert(m.agent_id);
      }
    }
  }
  return snap;
}

std::size_t Network::total_agents() const {
  std::size_t n = 0;
  for (const auto& [id, h] : habitats_) n += h.pool_agents.size();
  return n;
}

}  // namespace ecosim
