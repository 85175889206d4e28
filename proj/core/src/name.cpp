#include "icnsim/name.hpp"

#include <ostream>
#include <stdexcept>
#include <utility>

namespace icnsim {

void Name::validate_component(const std::string& c) {
  if (c.empty()) {
    throw std::invalid_argument("Name component must be non-empty");
  }
  if (c.find('/') != std::string::npos) {
    throw std::invalid_argument("Name component must not contain '/': " + c);
  }
}

Name::Name(std::vector<std::string> components) : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("Name must have at least one component");
  }
  for (const auto& c : components_) {
    validate_component(c);
  }
}

Name::Name(std::initializer_list<std::string> components)
    : Name(std::vector<std::string>(components)) {}

Name Name::parse(std::string_view text) {
  if (text.empty() || text.front() != '/') {
    throw std::invalid_argument("Name must start with '/': " + std::string(text));
  }
  std::vector<std::string> parts;
  std::size_t pos = 1;
  while (pos <= text.size()) {
    std::size_t next = text.find('/', pos);
    if (next == std::string_view::npos) {
      next = text.size();
    }
    parts.emplace_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return Name(std::move(parts));
}

bool Name::is_prefix_of(const Name& other) const {
  if (components_.size() > other.components_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i] != other.components_[i]) {
      return false;
    }
  }
  return true;
}

Name Name::appended(std::string component) const {
  auto parts = components_;
  parts.push_back(std::move(component));
  return Name(std::move(parts));
}

Name Name::appended(const Name& suffix) const {
  auto parts = components_;
  parts.insert(parts.end(), suffix.components_.begin(), suffix.components_.end());
  return Name(std::move(parts));
}

Name Name::prefix(std::size_t n) const {
  if (n > components_.size()) {
    throw std::out_of_range("Name::prefix length exceeds size");
  }
  return Name(std::vector<std::string>(components_.begin(), components_.begin() + n));
}

Name Name::suffix(std::size_t n) const {
  if (n > components_.size()) {
    throw std::out_of_range("Name::suffix start exceeds size");
  }
  return Name(std::vector<std::string>(components_.begin() + n, components_.end()));
}

std::string Name::to_string() const {
  std::string out;
  for (const auto& c : components_) {
    out += '/';
    out += c;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Name& name) {
  return os << name.to_string();
}

}  // namespace icnsim
