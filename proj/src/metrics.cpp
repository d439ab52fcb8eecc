#include "ecosim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ecosim/errors.hpp"

namespace ecosim {

double effectiveness(const AgentSequence& best, const UserRequest& request) {
  auto required = flatten(request);
  if (required.empty()) return 100.0;
  double sum = 0.0;
  for (const AttributeTuple& r : required) {
    int d = min_distance(r, best);
    sum += std::max(0.0, 1.0 - d / 100.0);
  }
  return 100.0 * sum / static_cast<double>(required.size());
}

SuccessionSeries succession_series(const EventLog& log, int window) {
  SuccessionSeries out;
  out.raw.x_label = "request_index";
  out.raw.y_label = "effectiveness";
  out.moving_average.x_label = "request_index";
  out.moving_average.y_label = "effectiveness_ma" + std::to_string(window);
  for (const auto& e : log)
    out.raw.points.push_back({static_cast<double>(e.request_index), e.effectiveness});
  int n = static_cast<int>(log.size());
  int half = window / 2;
  for (int i = 0; i < n; ++i) {
    int lo = std::max(0, i - half);
    int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += log[j].effectiveness;
    out.moving_average.points.push_back(
        {static_cast<double>(log[i].request_index), sum / (hi - lo + 1)});
  }
  return out;
}

SpeciesPartition partition_species(const std::vector<Agent>& agents, double threshold) {
  std::vector<Agent> ordered = agents;
  std::sort(ordered.begin(), ordered.end(),
            [](const Agent& a, const Agent& b) { return a.agent_id < b.agent_id; });

  SpeciesPartition out;
  // Identical descriptions always land in the same species, so cluster unique
  // descriptions and fan the members back out. Migrated copies share a
  // description, which keeps this pass fast on large worlds.
  std::map<std::vector<AttributeTuple>, std::size_t> desc_to_species;
  for (const Agent& a : ordered) {
    auto it = desc_to_species.find(a.description.tuples);
    if (it != desc_to_species.end()) {
      out.species[it->second].push_back(a.agent_id);
      continue;
    }
    std::size_t assigned = out.species.size();
    for (std::size_t s = 0; s < out.species.size(); ++s) {
      if (description_distance(a.description, out.representative[s]) <= threshold) {
        assigned = s;
        break;
      }
    }
    if (assigned == out.species.size()) {
      out.species.push_back({});
      out.representative.push_back(a.description);
    }
    out.species[assigned].push_back(a.agent_id);
    desc_to_species[a.description.tuples] = assigned;
  }
  return out;
}

std::vector<AbundanceBin> relative_abundance(const SpeciesPartition& partition) {
  std::map<int, int> counts;  // octave exponent -> species count
  for (const auto& s : partition.species) {
    int k = 0;
    while ((1u << (k + 1)) <= s.size()) ++k;
    counts[k] += 1;
  }
  std::vector<AbundanceBin> bins;
  for (const auto& [k, c] : counts)
    bins.push_back({1 << k, (1 << (k + 1)) - 1, c});
  return bins;
}

MetricSeries species_area(const World& world, int repeats, Rng& rng) {
  std::vector<HabitatId> all;
  for (const auto& [id, h] : world.net.habitats()) all.push_back(id);
  int max_n = std::min<int>(100, static_cast<int>(all.size()));

  MetricSeries out;
  out.x_label = "log10_n";
  out.y_label = "log10_mean_species";
  for (int n = 1; n <= max_n; ++n) {
    double total = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
      std::vector<HabitatId> pick = all;
      for (int i = 0; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> d(i, pick.size() - 1);
        std::swap(pick[i], pick[d(rng)]);
      }
      std::vector<Agent> pooled;
      for (int i = 0; i < n; ++i)
        for (const auto& [id, agent] : world.net.habitat(pick[i]).pool_agents)
          pooled.push_back(agent);
      if (!pooled.empty())
        total += static_cast<double>(partition_species(pooled).species.size());
    }
    double mean = total / repeats;
    if (mean > 0.0) out.points.push_back({std::log10(static_cast<double>(n)), std::log10(mean)});
  }
  return out;
}

PowerLawFit fit_power_law(const MetricSeries& series) {
  const auto& pts = series.points;
  if (pts.size() < 3) throw DegenerateInput("need at least 3 points for a power-law fit");
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double var_x = sxx - sx * sx / n;
  if (var_x <= 0.0) throw DegenerateInput("zero variance in x");
  PowerLawFit fit;
  fit.slope = (sxy - sx * sy / n) / var_x;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  double mean_y = sy / n;
  for (const auto& [x, y] : pts) {
    double e = y - (fit.slope * x + fit.intercept);
    ss_res += e * e;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  // An exact fit of constant data has 0/0; define it as a perfect fit.
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace ecosim
