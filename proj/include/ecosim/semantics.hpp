#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ecosim {

using AgentId = std::uint64_t;
using HabitatId = std::uint32_t;

// Attribute identifier and value both range over [1,100].
struct AttributeTuple {
  int attribute_id = 0;
  int value = 0;

  auto operator<=>(const AttributeTuple&) const = default;
};

inline constexpr int kAttributeMin = 1;
inline constexpr int kAttributeMax = 100;

// Distance between a required tuple and a candidate when their identifiers
// differ: as bad as the worst possible in-range value mismatch.
inline constexpr int kMissingPenalty = 100;

bool tuple_in_range(const AttributeTuple& t);

// A service's numeric genotype: 3-6 tuples with pairwise-distinct ids,
// stored sorted by attribute_id so serialization is deterministic.
struct SemanticDescription {
  std::vector<AttributeTuple> tuples;

  bool operator==(const SemanticDescription&) const = default;
};

// Sorts by attribute_id; throws InvalidConfig on duplicate ids or
// out-of-range tuples. Size bounds are checked by valid_description.
SemanticDescription make_description(std::vector<AttributeTuple> tuples);

bool valid_description(const SemanticDescription& d);

struct Agent {
  AgentId agent_id = 0;
  std::string service_ref;
  SemanticDescription description;
  HabitatId origin_habitat = 0;
  std::vector<HabitatId> migration_history;  // oldest first, starts at origin
  int usage_count = 0;
  int idle_request_count = 0;
  int escape_remaining = 0;
};

// The genome: an ordered aggregation of Agents, repetition allowed.
// provenance lists habitats where the sequence (or sub-sequences) was evolved.
struct AgentSequence {
  std::vector<Agent> members;
  std::vector<HabitatId> provenance;
};

// A list of 2-8 attribute sets, each set 3-7 tuples with distinct ids.
// Sets are kept sorted by attribute_id (canonical order).
struct UserRequest {
  std::vector<std::vector<AttributeTuple>> groups;
};

bool valid_request(const UserRequest& r);

int tuple_distance(const AttributeTuple& r, const AttributeTuple& a);

std::vector<AttributeTuple> flatten(const UserRequest& request);

// Minimum tuple_distance from r to any tuple of any member of the sequence.
int min_distance(const AttributeTuple& r, const AgentSequence& seq);

// 1 / (1 + total best-match distance); in (0,1], 1.0 iff exact cover.
double raw_fitness(const AgentSequence& seq, const UserRequest& request);

// Mean over the union of attribute ids: matched ids |v1-v2|/100, ids present
// on one side only 1.0. Symmetric, in [0,1], zero iff equal.
double description_distance(const SemanticDescription& a, const SemanticDescription& b);

// Human-readable rendering of numeric tuples (travel-industry style table).
class SemanticFilter {
 public:
  void set_field_name(int attribute_id, std::string name);
  void set_label(int attribute_id, int value, std::string field_name, std::string label);

  // Lines of `attribute_id,value,field_name,field_label`; value `*` maps the
  // field name only. '#' starts a comment.
  static SemanticFilter parse(const std::string& text);
  static SemanticFilter load(const std::string& path);

  std::string translate(const AttributeTuple& t) const;
  std::string translate(const SemanticDescription& d) const;
  std::string translate(const UserRequest& r) const;

 private:
  std::map<int, std::string> field_names_;
  std::map<std::pair<int, int>, std::string> labels_;
};

// Text syntax mirroring the filter output: `{(id,val),...}` for descriptions,
// `[{...},{...}]` for requests. Throws InvalidConfig on malformed input.
SemanticDescription parse_description(const std::string& text);
UserRequest parse_request(const std::string& text);

}  // namespace ecosim
