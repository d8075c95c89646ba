#pragma once

#include <stdexcept>
#include <string>

namespace qsd {

// Parameter set violates one of the MarketParams constraints.
class InvalidParams : public std::invalid_argument {
 public:
  explicit InvalidParams(const std::string& what) : std::invalid_argument(what) {}
};

// A function was evaluated outside its mathematical domain.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A converged trajectory matched none of the stable outcome tuples.
class ClassificationAmbiguous : public std::runtime_error {
 public:
  explicit ClassificationAmbiguous(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsd
