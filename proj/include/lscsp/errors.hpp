#pragma once

#include <stdexcept>
#include <string>

namespace lscsp {

/// Array dimensions disagree with the instance they are paired with.
class ShapeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Instance data violates a model invariant (nonpositive length, bad partition...).
class InvalidInstance : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inputs are individually valid but cannot be combined (e.g. an empty pattern list).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace lscsp
