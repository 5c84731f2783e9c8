#pragma once

#include <stdexcept>
#include <string>

namespace ltem {

// Failure domains are kept as distinct exception types so callers (and the
// CLI's exit-code mapping) can tell them apart without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model inputs or degenerate model states.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Fitting failures: insufficient support, constant series, no samples.
class FitError : public Error {
 public:
  using Error::Error;
};

// Malformed files, wire datagrams or corrupt logs.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid emulation scenarios (bad durations, capacities, time regressions).
class ScenarioError : public Error {
 public:
  using Error::Error;
};

// Socket and session setup failures.
class NetError : public Error {
 public:
  using Error::Error;
};

}  // namespace ltem
