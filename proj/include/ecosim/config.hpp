#pragma once

#include <string>

#include "ecosim/simulation.hpp"

namespace ecosim {

// Flat `key = value` text with '#' comments; nested sections use dotted keys
// (evolution.parsimony_alpha, feedback.eta_up).
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

// Fully commented default configuration, parseable back to the defaults.
std::string default_config_text();

}  // namespace ecosim
