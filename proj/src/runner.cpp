#include "ecosim/runner.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ecosim/errors.hpp"
#include "ecosim/metrics.hpp"

namespace ecosim {

namespace {

// Fixed decimal format, 6 fractional digits, locale independent.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string succession_csv(const EventLog& log) {
  std::string out = "request_index,user_id,habitat_id,best_fitness,effectiveness,generations,pool_size\n";
  for (const auto& e : log) {
    out += std::to_string(e.request_index) + "," + std::to_string(e.user_id) + "," +
           std::to_string(e.habitat_id) + "," + fmt(e.best_fitness) + "," +
           fmt(e.effectiveness) + "," + std::to_string(e.generations_run) + "," +
           std::to_string(e.pool_size_after) + "\n";
  }
  return out;
}

std::string abundance_csv(const std::vector<AbundanceBin>& bins) {
  std::string out = "bin_lo,bin_hi,species_count\n";
  for (const auto& b : bins)
    out += std::to_string(b.lo) + "," + std::to_string(b.hi) + "," +
           std::to_string(b.species_count) + "\n";
  return out;
}

std::string species_area_csv(const MetricSeries& series) {
  std::string out = "n,log10_n,mean_species,log10_mean_species\n";
  for (const auto& [lx, ly] : series.points) {
    double n = std::pow(10.0, lx);
    double mean = std::pow(10.0, ly);
    out += std::to_string(static_cast<int>(std::lround(n))) + "," + fmt(lx) + "," + fmt(mean) +
           "," + fmt(ly) + "\n";
  }
  return out;
}

nlohmann::json config_json(const SimConfig& c) {
  return {
      {"num_users", c.num_users},
      {"initial_agents_per_user", c.initial_agents_per_user},
      {"deploy_every_requests", c.deploy_every_requests},
      {"total_requests", c.total_requests},
      {"num_communities", c.num_communities},
      {"initial_degree", c.initial_degree},
      {"initial_link_p", c.initial_link_p},
      {"rng_seed", c.rng_seed},
      {"evolution",
       {{"crossover_fraction", c.evolution.crossover_fraction},
        {"mutation_fraction", c.evolution.mutation_fraction},
        {"base_pop_size", c.evolution.base_pop_size},
        {"size_factor", c.evolution.size_factor},
        {"parsimony_alpha", c.evolution.parsimony_alpha},
        {"max_generations", c.evolution.max_generations},
        {"stagnation_window", c.evolution.stagnation_window}}},
      {"feedback",
       {{"eta_up", c.feedback.eta_up},
        {"eta_down", c.feedback.eta_down},
        {"epsilon_close", c.feedback.epsilon_close},
        {"new_link_p0", c.feedback.new_link_p0},
        {"cluster_threshold", c.feedback.cluster_threshold},
        {"idle_limit", c.feedback.idle_limit}}},
  };
}

}  // namespace

std::string network_snapshot_json(const Network& net) {
  nlohmann::json habitats = nlohmann::json::array();
  for (const auto& [id, h] : net.habitats()) {
    nlohmann::json links = nlohmann::json::array();
    for (const auto& [target, link] : h.outgoing)
      links.push_back({{"to", target}, {"p", link.p}});
    habitats.push_back({{"habitat_id", id},
                        {"pool_agents", h.pool_agents.size()},
                        {"pool_sequences", h.pool_sequences.size()},
                        {"outgoing", links}});
  }
  nlohmann::json doc = {{"habitats", habitats}, {"total_agents", net.total_agents()}};
  return doc.dump(2) + "\n";
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunManifest run_experiment(const SimConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  World world = init(config);
  write_file(path("network_before.json"), network_snapshot_json(world.net));

  EventLog log;
  log.reserve(config.total_requests);
  for (int i = 0; i < config.total_requests; ++i) log.push_back(step(world));

  write_file(path("network_after.json"), network_snapshot_json(world.net));
  write_file(path("succession.csv"), succession_csv(log));

  std::vector<Agent> all_agents;
  for (const auto& [id, h] : world.net.habitats())
    for (const auto& [aid, agent] : h.pool_agents) all_agents.push_back(agent);
  if (!all_agents.empty()) {
    auto partition = partition_species(all_agents);
    write_file(path("species_abundance.csv"), abundance_csv(relative_abundance(partition)));
  } else {
    write_file(path("species_abundance.csv"), abundance_csv({}));
  }

  // Sub-stream derived from the master seed so the sampling is reproducible
  // but independent of the step-loop draws.
  Rng area_rng(config.rng_seed ^ 0x9e3779b97f4a7c15ull);
  write_file(path("species_area.csv"), species_area_csv(species_area(world, 10, area_rng)));

  RunManifest manifest;
  manifest.config = config;
  manifest.rng_seed = config.rng_seed;
  for (const char* name : {"network_before.json", "network_after.json", "succession.csv",
                           "species_abundance.csv", "species_area.csv"})
    manifest.file_digests[name] = file_digest(path(name));

  nlohmann::json mj = {{"version", manifest.version},
                       {"rng_seed", manifest.rng_seed},
                       {"config", config_json(config)},
                       {"files", manifest.file_digests}};
  write_file(path("manifest.json"), mj.dump(2) + "\n");
  return manifest;
}

}  // namespace ecosim
