#include "agents/replay.hpp"

#include <algorithm>
#include <set>

namespace mrl::agents {

ReplayAgent::ReplayAgent(const TrialRecord& fixture) {
  decisions_.reserve(fixture.iterations.size());
  for (const auto& it : fixture.iterations) decisions_.push_back(it.decision);
}

AgentDecision ReplayAgent::decide(const AgentRequest&) {
  if (next_ >= decisions_.size())
    throw AgentFailure("replay fixture exhausted after " +
                       std::to_string(decisions_.size()) + " decisions");
  return decisions_[next_++];
}

RecordedDomain::RecordedDomain(const TrialRecord& fixture) : fixture_(fixture) {}

std::vector<std::string> RecordedDomain::metric_names() const {
  std::set<std::string> names;
  for (const auto& [name, st] : fixture_.baseline.metrics) names.insert(name);
  for (const auto& it : fixture_.iterations)
    for (const auto& [name, st] : it.post.metrics) names.insert(name);
  return {names.begin(), names.end()};
}

MetricPolarity RecordedDomain::metric_polarity(const std::string& metric) const {
  // replayed trials are never driven by scripted policies, so a uniform
  // polarity is sufficient
  if (metric == "ipc" || metric == "val_accuracy" || metric == "convergence_rate")
    return MetricPolarity::LowerWorse;
  return MetricPolarity::HigherWorse;
}

std::vector<ActionSpec> RecordedDomain::actions() const {
  std::vector<ActionSpec> roster;
  std::set<std::string> seen;
  for (const auto& it : fixture_.iterations) {
    const std::string& id = it.decision.action_id;
    if (seen.insert(id).second) {
      ActionSpec a;
      a.id = id;
      a.category = "recorded";
      a.label = id;
      roster.push_back(std::move(a));
    }
  }
  if (roster.empty()) {
    ActionSpec a;
    a.id = "noop";
    a.category = "recorded";
    a.label = "noop";
    roster.push_back(std::move(a));
  }
  return roster;
}

MetricSnapshot RecordedDomain::reset(std::uint64_t) {
  next_ = 0;
  return fixture_.baseline;
}

MetricSnapshot RecordedDomain::apply_and_measure(const std::string& action_id) {
  if (next_ >= fixture_.iterations.size())
    throw DomainFailure("recorded fixture has no measurement for step " +
                        std::to_string(next_));
  const auto& it = fixture_.iterations[next_];
  if (it.decision.action_id != action_id)
    throw DomainFailure("recorded fixture expected action '" + it.decision.action_id +
                        "' at step " + std::to_string(next_) + ", got '" + action_id + "'");
  ++next_;
  return it.post;
}

}  // namespace mrl::agents
