#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace icnsim {

/// Hierarchical identifier for contents, services, devices and locators.
/// A Name is a non-empty ordered list of non-empty components; components
/// never contain '/'. Canonical text form is "/" + components joined by "/".
class Name {
 public:
  Name() = default;  // empty sentinel, produced only by default construction
  explicit Name(std::vector<std::string> components);
  Name(std::initializer_list<std::string> components);

  /// Parses canonical text form ("/a/b"). Throws std::invalid_argument on
  /// anything that does not round-trip (empty input, missing leading slash,
  /// empty components).
  static Name parse(std::string_view text);

  const std::vector<std::string>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  bool empty() const { return components_.empty(); }

  const std::string& at(std::size_t i) const { return components_.at(i); }

  /// True iff our components are a leading sublist of other's (reflexive).
  bool is_prefix_of(const Name& other) const;

  Name appended(std::string component) const;
  Name appended(const Name& suffix) const;
  /// First n components (n must be <= size()).
  Name prefix(std::size_t n) const;
  /// Components [n, size()). n must be <= size().
  Name suffix(std::size_t n) const;

  std::string to_string() const;

  auto operator<=>(const Name&) const = default;

 private:
  static void validate_component(const std::string& c);

  std::vector<std::string> components_;
};

std::ostream& operator<<(std::ostream& os, const Name& name);

}  // namespace icnsim
