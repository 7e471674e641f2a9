#pragma once

#include <stdexcept>
#include <string>

namespace ontomem {

// Root of every exception thrown by the library. Callers that only care
// about "something in ontomem failed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a data-model invariant (literal subject, non-IRI
// predicate, confidence outside [0,1], ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A test-scale guard was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Rule application exceeded the configured ceiling.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Optimistic-concurrency failure on commit.
class VersionConflictError : public Error {
 public:
  using Error::Error;
};

// Missing or unreadable recorded model output.
class TranscriptError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Hypothetical claim conditions clash with the trusted graph.
class ConditionInconsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ontomem
