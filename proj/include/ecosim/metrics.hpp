#pragma once

#include <string>
#include <vector>

#include "ecosim/semantics.hpp"
#include "ecosim/simulation.hpp"

namespace ecosim {

inline constexpr double kSpeciesThreshold = 0.10;

struct MetricSeries {
  std::vector<std::pair<double, double>> points;  // x strictly increasing
  std::string x_label;
  std::string y_label;
};

struct SpeciesPartition {
  std::vector<std::vector<AgentId>> species;
  std::vector<SemanticDescription> representative;  // first member per species
};

// Percent responsiveness of the returned sequence to the request: per required
// tuple, normalized closeness of the best match; 100 iff exact cover.
double effectiveness(const AgentSequence& best, const UserRequest& request);

struct SuccessionSeries {
  MetricSeries raw;
  MetricSeries moving_average;  // centered window
};

SuccessionSeries succession_series(const EventLog& log, int window = 50);

// Greedy leader clustering in agent_id order: join the first species whose
// representative is within the threshold, else found a new one.
SpeciesPartition partition_species(const std::vector<Agent>& agents,
                                   double threshold = kSpeciesThreshold);

struct AbundanceBin {
  int lo = 0;  // member-count range, powers of two: 1, 2-3, 4-7, ...
  int hi = 0;
  int species_count = 0;
};

std::vector<AbundanceBin> relative_abundance(const SpeciesPartition& partition);

// Mean species count over random habitat subsets of each size, on log-log axes.
MetricSeries species_area(const World& world, int repeats, Rng& rng);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// OLS on (already log-log) points; throws DegenerateInput for fewer than
// 3 points or zero x-variance.
PowerLawFit fit_power_law(const MetricSeries& series);

}  // namespace ecosim
