#include "ecosim/config.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "ecosim/errors.hpp"

namespace ecosim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

class KeyValues {
 public:
  explicit KeyValues(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw InvalidConfig("config line " + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty())
        throw InvalidConfig("config line " + std::to_string(lineno) + ": empty key or value");
      values_[key] = value;
    }
  }

  void get(const std::string& key, int& out) {
    if (auto v = take(key)) out = parse<int>(*v, key);
  }
  void get(const std::string& key, double& out) {
    if (auto v = take(key)) out = parse<double>(*v, key);
  }
  void get(const std::string& key, std::uint64_t& out) {
    if (auto v = take(key)) out = parse<std::uint64_t>(*v, key);
  }

  void check_consumed() const {
    if (!values_.empty()) throw InvalidConfig("unknown config key: " + values_.begin()->first);
  }

 private:
  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  template <typename T>
  static T parse(const std::string& v, const std::string& key) {
    std::istringstream in(v);
    T out;
    in >> out;
    if (in.fail() || !in.eof()) throw InvalidConfig("bad value for " + key + ": " + v);
    return out;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace

SimConfig parse_config(const std::string& text) {
  SimConfig c;
  KeyValues kv(text);
  kv.get("num_users", c.num_users);
  kv.get("initial_agents_per_user", c.initial_agents_per_user);
  kv.get("deploy_every_requests", c.deploy_every_requests);
  kv.get("total_requests", c.total_requests);
  kv.get("num_communities", c.num_communities);
  kv.get("initial_degree", c.initial_degree);
  kv.get("initial_link_p", c.initial_link_p);
  kv.get("rng_seed", c.rng_seed);
  kv.get("evolution.crossover_fraction", c.evolution.crossover_fraction);
  kv.get("evolution.mutation_fraction", c.evolution.mutation_fraction);
  kv.get("evolution.base_pop_size", c.evolution.base_pop_size);
  kv.get("evolution.size_factor", c.evolution.size_factor);
  kv.get("evolution.parsimony_alpha", c.evolution.parsimony_alpha);
  kv.get("evolution.max_generations", c.evolution.max_generations);
  kv.get("evolution.stagnation_window", c.evolution.stagnation_window);
  kv.get("feedback.eta_up", c.feedback.eta_up);
  kv.get("feedback.eta_down", c.feedback.eta_down);
  kv.get("feedback.epsilon_close", c.feedback.epsilon_close);
  kv.get("feedback.new_link_p0", c.feedback.new_link_p0);
  kv.get("feedback.cluster_threshold", c.feedback.cluster_threshold);
  kv.get("feedback.idle_limit", c.feedback.idle_limit);
  kv.check_consumed();
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string default_config_text() {
  return R"(# Digital ecosystem simulation configuration.
# Flat key = value pairs; '#' starts a comment.

# User base: one habitat per user, grouped round-robin into communities.
num_users = 100
initial_agents_per_user = 5
deploy_every_requests = 3
total_requests = 1000
num_communities = 8

# Start topology: sparse random bi-directional links, about initial_degree
# per habitat; migration routes are mostly discovered, not given.
initial_degree = 4
initial_link_p = 0.07

# Master seed; every run is reproducible from (config, seed).
rng_seed = 42

# Per-request genetic algorithm.
evolution.crossover_fraction = 0.10
evolution.mutation_fraction = 0.10
evolution.base_pop_size = 40
evolution.size_factor = 10.0
evolution.parsimony_alpha = 0.5
evolution.max_generations = 100
evolution.stagnation_window = 15

# Migration feedback: link strengthening, decay, and idle-agent escape.
feedback.eta_up = 0.2
feedback.eta_down = 0.1
feedback.epsilon_close = 0.02
feedback.new_link_p0 = 0.1
feedback.cluster_threshold = 0.1
feedback.idle_limit = 5
)";
}

}  // namespace ecosim
