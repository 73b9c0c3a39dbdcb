#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/errors.hpp"

namespace mrl {

using json = nlohmann::json;

enum class ObjectiveSense { Maximize, Minimize };
enum class Direction { Increase, Decrease };
enum class ParadoxClass { TypeA, TypeB, AlignedSuccess, AlignedFailure };

std::string to_string(ObjectiveSense s);
std::string to_string(Direction d);
std::string to_string(ParadoxClass c);
ObjectiveSense sense_from_string(const std::string& s);
Direction direction_from_string(const std::string& s);
ParadoxClass paradox_from_string(const std::string& s);

// (action worked, hypothesis verified) -> one of the four classes
ParadoxClass classify_paradox(bool action_success, bool abductive_success);

// Per-metric summary over the repetitions of one measurement.
struct MetricStats {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;
  int n_reps = 1;

  bool operator==(const MetricStats&) const = default;
};

// Summarize a list of repeated measurements into MetricStats.
MetricStats summarize_reps(const std::vector<double>& reps);

// Everything the agent may observe at one point in the loop. captured_at is
// a logical tick within the trial (baseline = 0), not wall-clock time, so
// records stay reproducible.
struct MetricSnapshot {
  std::map<std::string, MetricStats> metrics;
  double objective_value = 0.0;
  std::int64_t captured_at = 0;

  bool operator==(const MetricSnapshot&) const = default;
};

struct ActionSpec {
  std::string id;
  std::string category;
  std::string label;
  json payload;  // domain-opaque parameters

  bool operator==(const ActionSpec&) const = default;
};

// The verifiable core of an abductive hypothesis.
struct Hypothesis {
  std::string mechanism;
  std::string target_metric;
  Direction predicted_direction = Direction::Decrease;

  bool operator==(const Hypothesis&) const = default;
};

struct AgentDecision {
  Hypothesis hypothesis;
  std::string action_id;
  std::string rationale;
  std::string raw_output;  // verbatim agent response

  bool operator==(const AgentDecision&) const = default;
};

struct IterationRecord {
  int index = 0;
  MetricSnapshot pre;
  AgentDecision decision;
  MetricSnapshot post;
  double objective_delta = 0.0;
  bool action_success = false;
  bool abductive_success = false;
  ParadoxClass paradox_class = ParadoxClass::AlignedFailure;
  std::vector<std::string> flags;  // e.g. "domain_failure:...", "missing_metric"

  bool operator==(const IterationRecord&) const = default;
};

struct LoopConfig {
  int n_iterations = 10;
  int history_window_k = 5;
  double noise_epsilon_rel = 0.005;
  std::uint64_t seed = 0;
  ObjectiveSense objective_sense = ObjectiveSense::Maximize;
  bool baseline_in_context = true;

  bool operator==(const LoopConfig&) const = default;
};

// Throws ConfigError if any invariant is violated.
void validate(const LoopConfig& cfg);

struct TrialRecord {
  std::string domain_id;
  std::string agent_id;
  LoopConfig config;
  MetricSnapshot baseline;
  std::vector<IterationRecord> iterations;
  bool truncated = false;
  std::string truncation_reason;
  std::vector<std::string> flags;

  bool operator==(const TrialRecord&) const = default;
};

void to_json(json& j, const MetricStats& v);
void from_json(const json& j, MetricStats& v);
void to_json(json& j, const MetricSnapshot& v);
void from_json(const json& j, MetricSnapshot& v);
void to_json(json& j, const ActionSpec& v);
void from_json(const json& j, ActionSpec& v);
void to_json(json& j, const Hypothesis& v);
void from_json(const json& j, Hypothesis& v);
void to_json(json& j, const AgentDecision& v);
void from_json(const json& j, AgentDecision& v);
void to_json(json& j, const IterationRecord& v);
void from_json(const json& j, IterationRecord& v);
void to_json(json& j, const LoopConfig& v);
void from_json(const json& j, LoopConfig& v);

}  // namespace mrl
