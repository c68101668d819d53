#pragma once

#include <stdexcept>
#include <string>

namespace sawsle {

// Argument outside the domain of a statistic or map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or version-mismatched file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few usable rows/bins survived the exclusion rules of a fit.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyAccumulatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sawsle
