#pragma once

#include <string>
#include <vector>

#include "core/loop.hpp"

namespace mrl::agents {

// Replays the decisions of a recorded trial, in order. Exhaustion is an
// AgentFailure, which truncates the trial exactly where the fixture ends.
class ReplayAgent final : public Agent {
 public:
  explicit ReplayAgent(const TrialRecord& fixture);

  std::string id() const override { return "replay"; }
  AgentDecision decide(const AgentRequest& request) override;

 private:
  std::vector<AgentDecision> decisions_;
  std::size_t next_ = 0;
};

// Serves the recorded measurements of a fixture so a trial can be reproduced
// fully offline: reset() returns the recorded baseline, apply_and_measure()
// the recorded post snapshots in order. Together with ReplayAgent this turns
// any completed live trial back into an identical TrialRecord.
class RecordedDomain final : public Domain {
 public:
  explicit RecordedDomain(const TrialRecord& fixture);

  std::string id() const override { return fixture_.domain_id; }
  ObjectiveSense objective_sense() const override {
    return fixture_.config.objective_sense;
  }
  std::vector<std::string> metric_names() const override;
  MetricPolarity metric_polarity(const std::string& metric) const override;
  std::vector<ActionSpec> actions() const override;
  MetricSnapshot reset(std::uint64_t seed) override;
  MetricSnapshot apply_and_measure(const std::string& action_id) override;

 private:
  TrialRecord fixture_;
  std::size_t next_ = 0;
};

}  // namespace mrl::agents
