#pragma once

#include <stdexcept>
#include <string>

namespace morphsynth {

/// Instance or argument violates a documented contract.
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// No feasible solution exists for the given instance.
class infeasible_error : public std::runtime_error {
public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// A configured work cap (enumeration, DP cells, labels) was exceeded.
class limit_error : public std::runtime_error {
public:
  explicit limit_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace morphsynth
