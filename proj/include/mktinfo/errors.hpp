#pragma once

#include <stdexcept>
#include <string>

namespace mktinfo {

// Input data is malformed or too short for the requested analysis.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter lies outside the domain of the function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed (e.g. a covariance matrix could not be factorized).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mktinfo
