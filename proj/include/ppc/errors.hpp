#pragma once

#include <stdexcept>
#include <string>

namespace ppc {

// Thrown when a request exceeds an enumeration limit (K > 24, N > 20, ...).
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a Monte Carlo estimate is too sparse to support a fit.
class insufficient_samples_error : public std::runtime_error {
 public:
  explicit insufficient_samples_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ppc
