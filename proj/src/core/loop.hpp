#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace mrl {

// Whether a higher value of a metric means trouble (wall time, miss rates,
// losses) or a lower one does (ipc, accuracy). Scripted agents use this to
// pick a corrective direction.
enum class MetricPolarity { HigherWorse, LowerWorse };

// One measured environment. Implementations must be deterministic given the
// seed passed to reset(); all measurement runs serially on the caller thread.
class Domain {
 public:
  virtual ~Domain() = default;
  virtual std::string id() const = 0;
  virtual ObjectiveSense objective_sense() const = 0;
  virtual std::vector<std::string> metric_names() const = 0;
  virtual MetricPolarity metric_polarity(const std::string& metric) const = 0;
  virtual std::vector<ActionSpec> actions() const = 0;
  // (Re)initialize for a fresh trial and measure the baseline.
  virtual MetricSnapshot reset(std::uint64_t seed) = 0;
  // Apply the chosen intervention and measure. Throws DomainFailure on
  // compile/run/train errors; the loop records the iteration with post = pre.
  virtual MetricSnapshot apply_and_measure(const std::string& action_id) = 0;
};

struct ContextWindow {
  MetricSnapshot baseline;
  std::vector<IterationRecord> iterations;  // oldest -> newest
};

// The last min(k, length) iterations plus the baseline. Pure function.
ContextWindow build_context(const TrialRecord& trial_so_far, int k);

struct AgentRequest {
  std::string domain_id;
  ObjectiveSense objective_sense = ObjectiveSense::Maximize;
  std::vector<std::string> metric_names;
  std::vector<ActionSpec> roster;
  MetricSnapshot current;
  std::optional<MetricSnapshot> baseline;  // per LoopConfig.baseline_in_context
  ContextWindow context;
  std::string schema_description;  // matches the AgentDecision parser exactly
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string id() const = 0;
  // Throws AgentFailure when no valid decision can be produced (the loop
  // truncates the trial), TransportError on network problems.
  virtual AgentDecision decide(const AgentRequest& request) = 0;
};

// The schema text shown to agents; parse_decision validates against exactly
// this structure.
std::string decision_schema_description();

// Compact text rendering of a context window for agent prompts: one line per
// iteration with action label, hypothesis, metric deltas and outcome flag.
std::string render_context(const ContextWindow& ctx,
                           const std::vector<ActionSpec>& roster);
std::string render_snapshot(const MetricSnapshot& snapshot);

// Run the observe -> hypothesize -> act -> feedback loop for
// config.n_iterations iterations. Scores land on each iteration as it
// completes. Agent failure truncates the trial and marks it; domain failure
// records the iteration with post = pre.
TrialRecord run_trial(Domain& domain, Agent& agent, const LoopConfig& config);

}  // namespace mrl
