#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrl {

// Base for every harness error so callers can catch the whole family.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid loop/harness configuration, rejected before a trial starts.
struct ConfigError : Error {
  using Error::Error;
};

// The domain failed to apply/measure an intervention (compile error, run
// error, diverged training...). The loop records the iteration and continues.
struct DomainFailure : Error {
  using Error::Error;
};

// The agent produced no usable decision even after the repair retry.
struct AgentFailure : Error {
  using Error::Error;
};

// Network-level failure of the LLM client, distinct from schema problems.
struct TransportError : Error {
  using Error::Error;
};

// Agent output failed structural validation; message names the field.
struct SchemaViolation : Error {
  using Error::Error;
};

struct UnknownAction : Error {
  using Error::Error;
};

struct MarkerNotFound : Error {
  using Error::Error;
};

struct CompileError : DomainFailure {
  using DomainFailure::DomainFailure;
};

struct RunError : DomainFailure {
  using DomainFailure::DomainFailure;
};

struct ProfilerUnavailable : Error {
  using Error::Error;
};

struct MissingMetric : Error {
  using Error::Error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct DegenerateEntropy : Error {
  using Error::Error;
};

// Malformed trial record input; carries the position of the offending line.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t line, std::size_t byte_offset)
      : Error(msg + " (line " + std::to_string(line) + ", byte offset " +
              std::to_string(byte_offset) + ")"),
        line(line),
        byte_offset(byte_offset) {}
  std::size_t line = 0;
  std::size_t byte_offset = 0;
};

}  // namespace mrl
