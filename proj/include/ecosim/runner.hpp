#pragma once

#include <map>
#include <string>

#include "ecosim/simulation.hpp"

namespace ecosim {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunManifest {
  SimConfig config;
  std::uint64_t rng_seed = 0;
  std::string version = kArtifactVersion;
  std::map<std::string, std::string> file_digests;  // filename -> hex digest
};

// Full experiment pipeline: init, snapshot, total_requests steps, snapshot,
// metrics, CSV + JSON emission, manifest. Returns the manifest.
RunManifest run_experiment(const SimConfig& config, const std::string& out_dir);

// FNV-1a 64-bit digest of a file's bytes, lowercase hex.
std::string file_digest(const std::string& path);

std::string network_snapshot_json(const Network& net);

}  // namespace ecosim
