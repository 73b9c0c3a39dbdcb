#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/loop.hpp"
#include "core/rng.hpp"

namespace mrl::agents {

// What a scripted policy knows about the environment it plays in; copied
// from the Domain at construction so agents stay value types.
struct ScriptedContext {
  std::string domain_id;
  std::vector<std::string> metric_names;
  std::vector<ActionSpec> roster;
  std::map<std::string, MetricPolarity> polarity;
  // objective-effect prior, used by the prior agent on the synth domain
  std::vector<std::vector<double>> effect_prior;
};

ScriptedContext scripted_context_for(Domain& domain);

// Signal-dominated policy: targets the metric with the largest relative
// deterioration since baseline (largest current burden when nothing has
// deteriorated), predicts the corrective direction, and picks the action its
// metric->action table maps to that metric. corruption in [0,1] deranges
// that fraction of the table entries deterministically.
class SignalAgent final : public Agent {
 public:
  SignalAgent(ScriptedContext ctx, double corruption = 0.0);

  std::string id() const override { return id_; }
  AgentDecision decide(const AgentRequest& request) override;

  const std::map<std::string, std::string>& action_table() const { return table_; }

 private:
  ScriptedContext ctx_;
  std::map<std::string, std::string> table_;  // metric -> action id
  std::string id_;
};

// Prior-dominated policy: ignores observations entirely. Emits a fixed
// domain-folklore hypothesis and the action its (possibly corrupted) prior
// scores best. Mirrors the low-observability failure mode.
class PriorAgent final : public Agent {
 public:
  PriorAgent(ScriptedContext ctx, double corruption = 0.0);

  std::string id() const override { return id_; }
  AgentDecision decide(const AgentRequest& request) override;

 private:
  ScriptedContext ctx_;
  Hypothesis hypothesis_;
  std::string action_id_;
  std::string id_;
};

// Uniformly random probe, seeded.
class RandomAgent final : public Agent {
 public:
  RandomAgent(ScriptedContext ctx, std::uint64_t seed);

  std::string id() const override { return "random"; }
  AgentDecision decide(const AgentRequest& request) override;

 private:
  ScriptedContext ctx_;
  Rng rng_;
};

// Default metric -> action table for a domain; exposed for tests.
std::map<std::string, std::string> default_signal_table(const ScriptedContext& ctx);

}  // namespace mrl::agents
