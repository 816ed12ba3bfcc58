#pragma once

#include <stdexcept>
#include <string>

namespace twistabs {

/// Invalid quantum numbers, out-of-range angles or grids, malformed scenario
/// definitions. Maps to CLI exit code 2.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Bad command-line or config input. Maps to CLI exit code 1.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace twistabs
