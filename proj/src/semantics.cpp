#include "ecosim/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ecosim/errors.hpp"

namespace ecosim {

bool tuple_in_range(const AttributeTuple& t) {
  return t.attribute_id >= kAttributeMin && t.attribute_id <= kAttributeMax &&
         t.value >= kAttributeMin && t.value <= kAttributeMax;
}

SemanticDescription make_description(std::vector<AttributeTuple> tuples) {
  std::sort(tuples.begin(), tuples.end(), [](const AttributeTuple& a, const AttributeTuple& b) {
    return a.attribute_id < b.attribute_id;
  });
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    if (!tuple_in_range(tuples[i]))
      throw InvalidConfig("attribute tuple out of range");
    if (i > 0 && tuples[i].attribute_id == tuples[i - 1].attribute_id)
      throw InvalidConfig("duplicate attribute id in description");
  }
  return SemanticDescription{std::move(tuples)};
}

bool valid_description(const SemanticDescription& d) {
  if (d.tuples.size() < 3 || d.tuples.size() > 6) return false;
  for (std::size_t i = 0; i < d.tuples.size(); ++i) {
    if (!tuple_in_range(d.tuples[i])) return false;
    if (i > 0 && d.tuples[i].attribute_id <= d.tuples[i - 1].attribute_id) return false;
  }
  return true;
}

bool valid_request(const UserRequest& r) {
  if (r.groups.size() < 2 || r.groups.size() > 8) return false;
  for (const auto& g : r.groups) {
    if (g.size() < 3 || g.size() > 7) return false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!tuple_in_range(g[i])) return false;
      if (i > 0 && g[i].attribute_id <= g[i - 1].attribute_id) return false;
    }
  }
  return true;
}

int tuple_distance(const AttributeTuple& r, const AttributeTuple& a) {
  if (r.attribute_id != a.attribute_id) return kMissingPenalty;
  return std::abs(r.value - a.value);
}

std::vector<AttributeTuple> flatten(const UserRequest& request) {
  std::vector<AttributeTuple> out;
  for (const auto& g : request.groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

int min_distance(const AttributeTuple& r, const AgentSequence& seq) {
  int best = kMissingPenalty;
  for (const Agent& m : seq.members)
    for (const AttributeTuple& a : m.description.tuples)
      best = std::min(best, tuple_distance(r, a));
  return best;
}

double raw_fitness(const AgentSequence& seq, const UserRequest& request) {
  long total = 0;
  for (const AttributeTuple& r : flatten(request)) total += min_distance(r, seq);
  return 1.0 / (1.0 + static_cast<double>(total));
}

double description_distance(const SemanticDescription& a, const SemanticDescription& b) {
  std::map<int, int> va, vb;
  for (const auto& t : a.tuples) va[t.attribute_id] = t.value;
  for (const auto& t : b.tuples) vb[t.attribute_id] = t.value;
  std::set<int> ids;
  for (const auto& [id, v] : va) ids.insert(id);
  for (const auto& [id, v] : vb) ids.insert(id);
  if (ids.empty()) return 0.0;
  double sum = 0.0;
  for (int id : ids) {
    auto ia = va.find(id);
    auto ib = vb.find(id);
    if (ia != va.end() && ib != vb.end())
      sum += std::abs(ia->second - ib->second) / 100.0;
    else
      sum += 1.0;
  }
  return sum / static_cast<double>(ids.size());
}

void SemanticFilter::set_field_name(int attribute_id, std::string name) {
  field_names_[attribute_id] = std::move(name);
}

void SemanticFilter::set_label(int attribute_id, int value, std::string field_name,
                               std::string label) {
  field_names_[attribute_id] = std::move(field_name);
  labels_[{attribute_id, value}] = std::move(label);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

SemanticFilter SemanticFilter::parse(const std::string& text) {
  SemanticFilter f;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    // field_label may not contain commas; split on every comma.
    while (true) {
      std::size_t c = s.find(',', pos);
      if (c == std::string::npos) {
        cols.push_back(trim(s.substr(pos)));
        break;
      }
      cols.push_back(trim(s.substr(pos, c - pos)));
      pos = c + 1;
    }
    if (cols.size() < 3)
      throw InvalidConfig("filter line " + std::to_string(lineno) + ": expected at least 3 fields");
    int id = 0;
    try {
      id = std::stoi(cols[0]);
    } catch (const std::exception&) {
      throw InvalidConfig("filter line " + std::to_string(lineno) + ": bad attribute id");
    }
    if (cols[1] == "*") {
      f.set_field_name(id, cols[2]);
    } else {
      if (cols.size() < 4)
        throw InvalidConfig("filter line " + std::to_string(lineno) + ": expected 4 fields");
      int value = 0;
      try {
        value = std::stoi(cols[1]);
      } catch (const std::exception&) {
        throw InvalidConfig("filter line " + std::to_string(lineno) + ": bad value");
      }
      f.set_label(id, value, cols[2], cols[3]);
    }
  }
  return f;
}

SemanticFilter SemanticFilter::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open filter file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string SemanticFilter::translate(const AttributeTuple& t) const {
  std::string field;
  auto fn = field_names_.find(t.attribute_id);
  if (fn != field_names_.end())
    field = fn->second;
  else
    field = "attr" + std::to_string(t.attribute_id);
  auto lb = labels_.find({t.attribute_id, t.value});
  std::string label = lb != labels_.end() ? lb->second : std::to_string(t.value);
  return "(" + field + ", " + label + ")";
}

std::string SemanticFilter::translate(const SemanticDescription& d) const {
  std::string out = "{";
  for (std::size_t i = 0; i < d.tuples.size(); ++i) {
    if (i) out += ", ";
    out += translate(d.tuples[i]);
  }
  out += "}";
  return out;
}

std::string SemanticFilter::translate(const UserRequest& r) const {
  std::string out = "[";
  for (std::size_t i = 0; i < r.groups.size(); ++i) {
    if (i) out += ", ";
    out += translate(SemanticDescription{r.groups[i]});
  }
  out += "]";
  return out;
}

namespace {

// Parses `{(id,val),(id,val),...}` starting at pos; advances pos past '}'.
std::vector<AttributeTuple> parse_tuple_set(const std::string& s, std::size_t& pos) {
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c)
      throw InvalidConfig(std::string("expected '") + c + "' in tuple syntax");
    ++pos;
  };
  auto parse_int = [&]() -> int {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw InvalidConfig("expected integer in tuple syntax");
    return std::stoi(s.substr(start, pos - start));
  };
  std::vector<AttributeTuple> tuples;
  expect('{');
  skip_ws();
  if (pos < s.size() && s[pos] == '}') {
    ++pos;
    return tuples;
  }
  while (true) {
    expect('(');
    int id = parse_int();
    expect(',');
    int value = parse_int();
    expect(')');
    tuples.push_back({id, value});
    skip_ws();
    if (pos < s.size() && s[pos] == ',') {
      ++pos;
      continue;
    }
    expect('}');
    break;
  }
  return tuples;
}

}  // namespace

SemanticDescription parse_description(const std::string& text) {
  std::size_t pos = 0;
  auto tuples = parse_tuple_set(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw InvalidConfig("trailing characters after description");
  return make_description(std::move(tuples));
}

UserRequest parse_request(const std::string& text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos >= text.size() || text[pos] != '[') throw InvalidConfig("expected '[' in request syntax");
  ++pos;
  UserRequest r;
  skip_ws();
  if (pos < text.size() && text[pos] == ']') {
    ++pos;
  } else {
    while (true) {
      skip_ws();
      auto tuples = parse_tuple_set(text, pos);
      r.groups.push_back(make_description(std::move(tuples)).tuples);
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ']') {
        ++pos;
        break;
      }
      throw InvalidConfig("expected ',' or ']' in request syntax");
    }
  }
  skip_ws();
  if (pos != text.size()) throw InvalidConfig("trailing characters after request");
  return r;
}

}  // namespace ecosim
