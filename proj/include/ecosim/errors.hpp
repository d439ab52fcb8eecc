#pragma once

#include <stdexcept>
#include <string>

namespace ecosim {

struct UnknownHabitat : std::runtime_error {
  explicit UnknownHabitat(const std::string& what) : std::runtime_error(what) {}
};

struct SelfLink : std::runtime_error {
  explicit SelfLink(const std::string& what) : std::runtime_error(what) {}
};

struct DuplicateHabitat : std::runtime_error {
  explicit DuplicateHabitat(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientPeers : std::runtime_error {
  explicit InsufficientPeers(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyPool : std::runtime_error {
  explicit EmptyPool(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidConfig : std::runtime_error {
  explicit InvalidConfig(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateInput : std::runtime_error {
  explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ecosim
