#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ecosim/config.hpp"
#include "ecosim/errors.hpp"
#include "ecosim/runner.hpp"
#include "ecosim/semantics.hpp"

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_override,
            const std::string& out_dir) {
  ecosim::SimConfig config;
  try {
    config = ecosim::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (seed_override) {
    config.rng_seed = *seed_override;
  } else if (const char* env = std::getenv("ECOSIM_SEED")) {
    try {
      config.rng_seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: bad ECOSIM_SEED value: " << env << "\n";
      return 2;
    }
  }
  try {
    auto manifest = ecosim::run_experiment(config, out_dir);
    std::cout << "run complete: " << manifest.file_digests.size() << " files in " << out_dir
              << "\n";
  } catch (const ecosim::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_translate(const std::string& filter_path, const std::string& input_path) {
  ecosim::SemanticFilter filter;
  try {
    filter = ecosim::SemanticFilter::load(filter_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::ifstream in(input_path);
  if (!in) {
    std::cerr << "error: cannot open input file: " << input_path << "\n";
    return 2;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    if (trimmed.empty()) {
      std::cout << "\n";
      continue;
    }
    try {
      if (trimmed[0] == '[')
        std::cout << filter.translate(ecosim::parse_request(trimmed)) << "\n";
      else
        std::cout << filter.translate(ecosim::parse_description(trimmed)) << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: line " << lineno << ": " << e.what() << "\n";
      return 2;
    }
  }
  return 0;
}

int cmd_init_config(const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 3;
  }
  out << ecosim::default_config_text();
  if (!out) {
    std::cerr << "error: write failed for " << out_path << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital ecosystem simulator: evolving agent-sequences over a habitat network"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the simulation and emit experiment data");
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--seed", seed, "Override the configured seed");
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* translate = app.add_subcommand("translate", "Render numeric descriptions through a semantic filter");
  std::string filter_path, input_path;
  translate->add_option("--filter", filter_path, "Filter table file")->required();
  translate->add_option("--in", input_path, "Input file, one description or request per line")
      ->required();

  auto* init = app.add_subcommand("init-config", "Write a commented default configuration");
  std::string init_out;
  init->add_option("--out", init_out, "Destination path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, seed, out_dir);
  if (translate->parsed()) return cmd_translate(filter_path, input_path);
  return cmd_init_config(init_out);
}
